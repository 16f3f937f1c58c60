#pragma once

#include <stdexcept>
#include <string>

namespace matting {

// File or record content that cannot be used: missing paths, undecodable
// formats, malformed manifests. CLI maps this to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values reaching losses or parameters. CLI maps this to exit
// code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace matting
