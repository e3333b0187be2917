#include <iostream>

#include <CLI11.hpp>

#include "podium/cli.hpp"

int main(int argc, char** argv)
{
    namespace cli = podium::cli;

    CLI::App app{"podium: delivery-prompt scripts, live alignment and pacing"};
    app.require_subcommand(1);

    cli::PreprocessOptions pre;
    auto* preprocess = app.add_subcommand("preprocess", "polish a manuscript into a script package");
    preprocess->add_option("manuscript", pre.manuscript, "plain-text manuscript, slides split by '---'")
        ->required();
    preprocess->add_option("--factors", pre.factors, "comma-separated delivery factors");
    preprocess->add_flag("--preset", pre.preset, "use the recommended factor preset");
    preprocess->add_option("--time-limit", pre.time_limit_s, "talk budget in seconds")
        ->capture_default_str();
    preprocess->add_option("--wpm", pre.wpm, "target speaking rate")->capture_default_str();
    preprocess->add_option("--slides", pre.slides_manifest, "manifest: thumbnail<TAB>visual notes");
    preprocess->add_option("--out", pre.out, "package path")->required();
    preprocess->add_option("--dsl-out", pre.dsl_out, "also write the polished markup here");
    preprocess->add_flag("--mock-llm", pre.mock_llm, "offline deterministic polisher");

    cli::ServeOptions serve_opt;
    auto* serve = app.add_subcommand("serve", "run the session hub over TCP");
    serve->add_option("--port", serve_opt.port, "listen port")->capture_default_str();
    serve->add_option("--host", serve_opt.host, "listen address")->capture_default_str();

    cli::ReplayOptions rep;
    double replay_limit = 0;
    auto* replay = app.add_subcommand("replay", "align a recorded transcript and trace pacing");
    replay->add_option("package", rep.package)->required();
    replay->add_option("transcript", rep.transcript, "t_ms<TAB>text lines")->required();
    auto* limit_opt = replay->add_option("--time-limit", replay_limit, "override the package budget");
    replay->add_option("--out", rep.out, "trace path (default stdout)");

    cli::SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "replay a scripted session against the engine");
    simulate->add_option("package", sim.package)->required();
    simulate->add_option("events", sim.events)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kInvalidInput;
    }

    if (*preprocess) {
        return cli::cmd_preprocess(pre, std::cout, std::cerr);
    }
    if (*serve) {
        return cli::cmd_serve(serve_opt, std::cout, std::cerr);
    }
    if (*replay) {
        if (*limit_opt) {
            rep.time_limit_s = replay_limit;
        }
        return cli::cmd_replay(rep, std::cout, std::cerr);
    }
    return cli::cmd_simulate(sim, std::cout, std::cerr);
}
