#include "pw/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Contravariant Levi-Civita geometry of Poisson manifolds and warped products"};
    app.set_version_flag("--version", "pw 0.1.0");

    pw::cli::Options o;
    std::string output = "text";
    app.add_option("command", o.command, "Command to run")
        ->required()
        ->check(CLI::IsMember(pw::cli::commands()));
    app.add_option("manifest", o.manifest, "JSON manifest");
    app.add_option("--target", o.target, "Manifold or warped product to run on (default: all)");
    app.add_option("--points", o.points, "Number of sample points (default 100)");
    app.add_option("--seed", o.seed, "Sampling seed (default 42)");
    app.add_option("--tol", o.tol, "Residual tolerance (default 1e-9)");
    app.add_option("--output", output, "Report format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--lambda", o.lambda, "Base Einstein constant");
    app.add_option("--lambda-hat", o.lambda_hat, "Fiber Einstein constant");
    app.add_option("--sb", o.sb, "Base scalar curvature");
    app.add_option("--mu", o.mu, "Fiber scalar curvature");
    app.add_option("--mu1", o.mu1, "Target scalar curvature of the product");
    app.add_option("--s2", o.s2, "Fiber dimension");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : pw::cli::kExitError;
    }
    o.format = output == "json" ? pw::cli::Format::Json : pw::cli::Format::Text;
    return pw::cli::run(o, std::cout, std::cerr);
}
