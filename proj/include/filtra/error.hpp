#ifndef FILTRA_ERROR_HPP
#define FILTRA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace filtra {

/// Error with a stable machine-readable code plus human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, std::string detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)), detail_(std::move(detail)) {}

    const std::string& code() const { return code_; }
    const std::string& detail() const { return detail_; }

private:
    std::string code_;
    std::string detail_;
};

} // namespace filtra

#endif
