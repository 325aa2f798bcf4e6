// SPDX-License-Identifier: Apache-2.0

#ifndef SCATTERFM_ERRORS_HPP
#define SCATTERFM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace scatterfm
{

// Error families. The CLI maps each family to one exit code:
//   ValidationError, SolverError -> 2
//   DataError                    -> 3
//   IoError                      -> 4

class ValidationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace scatterfm

#endif  // SCATTERFM_ERRORS_HPP
