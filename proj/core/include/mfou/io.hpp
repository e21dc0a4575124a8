#pragma once

#include <string>

#include "mfou/errors.hpp"

#include "mfou/innovation.hpp"
#include "mfou/simulate.hpp"
#include "mfou/spectral.hpp"

namespace mfou {

class IoError : public Error {
public:
    using Error::Error;
};

// malformed file contents (as opposed to a missing or unwritable file)
class ParseError : public Error {
public:
    using Error::Error;
};

// `t,x` with 17 significant digits, one row per grid point
void write_path_csv(const std::string& file, const SamplePath& path);
SamplePath read_path_csv(const std::string& file);

void write_periodogram_csv(const std::string& file, const Periodogram& pg);
void write_g_csv(const std::string& file, const NystromSolution& sol);

}  // namespace mfou
