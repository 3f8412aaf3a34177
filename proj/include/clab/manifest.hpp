#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace clab::manifest {

// Reproducibility record written next to every set of outputs. The body is a
// valid config file (key=value lines), so a run can be replayed with
// `--config <out>/manifest.txt`; checksums and timing ride along as comments.
struct RunManifest {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> config; // resolved option values
    std::vector<std::pair<std::string, std::string>> checksums; // file -> fnv1a hex
    double duration_s = 0.0;

    std::string render() const;
};

void write(const RunManifest& m, const std::filesystem::path& out_dir);

} // namespace clab::manifest
