#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gsm::cli {

// Exit statuses.
constexpr int kOk = 0;
constexpr int kHardFailure = 1;
constexpr int kUsageError = 2;
constexpr int kInconclusive = 3;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int main(int argc, char** argv);

}  // namespace gsm::cli
