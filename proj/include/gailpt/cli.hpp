#ifndef GAILPT_CLI_HPP
#define GAILPT_CLI_HPP

namespace gailpt {

/// Entry point behind the gailpt binary; returns the process exit status.
int cli_main(int argc, const char* const* argv);

}  // namespace gailpt

#endif
