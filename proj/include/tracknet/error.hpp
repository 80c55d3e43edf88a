#pragma once

#include <stdexcept>
#include <string>

namespace tracknet {

// Raised when an operation's preconditions or input contracts are violated.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tracknet
