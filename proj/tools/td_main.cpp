#include <CLI11.hpp>

#include <td/cli.hpp>
#include <td/config.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

struct Cmd {
    CLI::App* sub = nullptr;
    std::map<std::string, std::string> vals;
    std::vector<std::pair<std::string, CLI::Option*>> opts;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"transport-density laboratory on the right triangle"};
    std::string config_path;
    app.add_option("--config", config_path,
                   "run the experiment spec in this JSON file");

    std::map<std::string, Cmd> cmds;
    auto make_cmd = [&](const std::string& name, const std::string& desc,
                        std::vector<std::pair<std::string, std::string>> extra,
                        bool common = true) -> Cmd& {
        Cmd& c = cmds[name];
        c.sub = app.add_subcommand(name, desc);
        std::vector<std::pair<std::string, std::string>> options;
        if (common) {
            options = {
                {"gamma", "homogeneity exponent of the ray fan"},
                {"beta", "perturbation amplitude (0 = derived maximum)"},
                {"quad-tol", "absolute quadrature tolerance"},
                {"root-tol", "root-finding tolerance"},
                {"seed", "opaque tag echoed into the report"},
            };
        }
        options.insert(options.end(), extra.begin(), extra.end());
        options.push_back({"out", "output path (atomic write; stdout if "
                                  "omitted)"});
        for (auto& [key, help] : options) {
            auto& slot = c.vals[key];
            c.opts.emplace_back(key,
                                c.sub->add_option("--" + key, slot, help));
        }
        return c;
    };

    make_cmd("eval", "sample sigma, the potential, and d(sigma)/dx2 on a "
                     "sheared lattice (CSV)",
             {{"grid", "lattice resolution per axis (default 128)"}});
    make_cmd("holder", "fit the vertex growth exponent of sigma",
             {{"eps-min", "smallest offset along the foot ray"},
              {"eps-max", "largest offset along the foot ray"},
              {"points", "number of log-spaced offsets (default 16)"}});
    make_cmd("sobolev", "fit the rate of divergence of the local W^{1,p} "
                        "seminorm at the vertex",
             {{"p", "Lebesgue exponent (default 2)"},
              {"r0-min", "smallest cut radius"},
              {"r0-max", "largest cut radius"},
              {"points", "number of log-spaced radii (default 9)"}});
    make_cmd("bv", "partial sums of the total variation along the chain",
             {{"n-max", "number of chain segments (default 200)"}});
    Cmd& verify = make_cmd(
        "verify", "optimality certificates (duality | lp | pde | gradients | "
                  "all)",
        {{"cells", "quantizer resolution per axis (default 32)"},
         {"samples", "gradient audit sample count (default 10000)"}});
    {
        auto& slot = verify.vals["what"];
        verify.opts.emplace_back(
            "what", verify.sub->add_option(
                        "what", slot, "certificate family (default all)"));
    }
    make_cmd("smooth", "mass balance and correction-slope audit of the "
                       "smoothed pair",
             {{"eps", "inner cutoff of the vertex window"},
              {"eps-prime", "outer cutoff of the vertex window"},
              {"a0", "chart cutoff on the base"},
              {"samples", "number of audited labels (default 20)"}});
    make_cmd("render", "rasterize an eval grid into an SVG heatmap",
             {{"in", "grid CSV produced by eval"},
              {"field", "column to colour by (default sigma)"}},
             /*common=*/false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : td::kExitUsage;
    }

    td::ExperimentSpec spec;
    if (!config_path.empty()) {
        if (!app.get_subcommands().empty()) {
            std::fprintf(stderr,
                         "usage error: --config and a subcommand are "
                         "mutually exclusive\n");
            return td::kExitUsage;
        }
        std::ifstream f(config_path);
        if (!f) {
            std::fprintf(stderr, "i/o error: cannot read '%s'\n",
                         config_path.c_str());
            return td::kExitIo;
        }
        std::stringstream ss;
        ss << f.rdbuf();
        try {
            spec = td::spec_from_json(ss.str());
        } catch (const td::Error& e) {
            std::fprintf(stderr, "usage error: %s\n", e.what());
            return td::kExitUsage;
        }
    } else {
        const auto subs = app.get_subcommands();
        if (subs.empty()) {
            std::fputs(app.help().c_str(), stdout);
            return td::kExitUsage;
        }
        Cmd& c = cmds[subs[0]->get_name()];
        spec.command = subs[0]->get_name();
        for (auto& [key, opt] : c.opts)
            if (opt->count() > 0) spec.params[key] = c.vals[key];
    }
    return td::run(spec);
}
