#pragma once

#include <map>
#include <string>

namespace td {

// One experiment: a command plus its flag values, exactly as given on the
// command line (defaults are applied by run, so a spec file and a flag
// invocation go through the same path).
struct ExperimentSpec {
    std::string command; // eval | holder | sobolev | bv | verify | smooth
    std::map<std::string, std::string> params;
};

ExperimentSpec spec_from_json(const std::string& text);
std::string spec_to_json(const ExperimentSpec& spec);

// Exit codes of run:
//   0  ran, verdict Consistent (or the command has no verdict)
//   2  ran, verdict Inconsistent
//   1  domain/runtime error (message on stderr)
//  64  usage error: unknown command, bad or missing parameter
//  74  I/O error: unreadable input, unwritable output
inline constexpr int kExitConsistent = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInconsistent = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitIo = 74;

// Executes one experiment; writes declared outputs atomically (temp file in
// the target directory, then rename). Reports embed the spec echo and the
// full GammaConfig.
int run(const ExperimentSpec& spec);

// Rasterizes one numeric column of an eval grid as an SVG heatmap with a
// legend. Deterministic: fixed canvas, fixed colormap, fixed formatting.
// Throws SchemaMismatch if the CSV lacks the eval header or the field.
void render_heatmap(const std::string& grid_csv, const std::string& out_svg,
                    const std::string& field);

} // namespace td
