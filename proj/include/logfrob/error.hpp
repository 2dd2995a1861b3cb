#ifndef LOGFROB_ERROR_HPP
#define LOGFROB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace logfrob {

// All library failures carry a short stable code ("NotSmooth",
// "SpecParseError", ...) that the CLI surfaces together with context.
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code))
    {
    }
    const std::string& code() const { return code_; }

  private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& msg)
{
    throw Error(code, msg);
}

#define LF_CHECK(cond, code, msg)                                            \
    do {                                                                     \
        if (!(cond))                                                         \
            ::logfrob::fail(code, msg);                                      \
    } while (0)

// Internal invariant; a violation is a bug, not a user error.
#define LF_ASSERT(cond, msg) LF_CHECK(cond, "Internal", msg)

} // namespace logfrob

#endif
