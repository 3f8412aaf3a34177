#include "clab/manifest.hpp"

#include "clab/csvio.hpp"
#include "clab/version.hpp"

namespace clab::manifest {

std::string RunManifest::render() const {
    std::string s;
    s += "# collapse-lab run manifest\n";
    s += "# version=";
    s += kVersion;
    s += "\n";
    s += "subcommand=" + subcommand + "\n";
    for (const auto& [k, v] : config) s += k + "=" + v + "\n";
    s += "# duration_s=" + csvio::format_double(duration_s) + "\n";
    for (const auto& [file, sum] : checksums) s += "# checksum " + file + "=fnv1a:" + sum + "\n";
    return s;
}

void write(const RunManifest& m, const std::filesystem::path& out_dir) {
    csvio::write_text_atomic(out_dir / "manifest.txt", m.render());
}

} // namespace clab::manifest
