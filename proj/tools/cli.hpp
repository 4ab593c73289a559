#ifndef MRSNE_CLI_HPP
#define MRSNE_CLI_HPP

namespace mrsne {

/// Entry point of the mrsne command-line tool. Returns 0 on success, 1 on a
/// usage error, 2 on a data or numeric error.
int cli_main(int argc, const char* const* argv);

} // namespace mrsne

#endif // MRSNE_CLI_HPP
