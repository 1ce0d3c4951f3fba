#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dnf {

/// Environment variable consulted for the output directory when neither
/// --out nor the config's run.out_dir is given.
inline constexpr const char* kOutDirEnv = "DNF_VOT_OUT_DIR";

/// `args` includes the program name. Returns 0 on success, 1 on runtime or
/// configuration errors, 2 on usage errors.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dnf
