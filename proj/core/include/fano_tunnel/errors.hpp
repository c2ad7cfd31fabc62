// Copyright 2026 The fano-tunnel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fano_tunnel {

/// Base class of every numerical or contract failure raised by the library.
/// `name()` is the stable identifier written into CLI reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual std::string_view name() const noexcept = 0;
};

#define FANO_TUNNEL_DEFINE_ERROR(Type)                                         \
  class Type final : public Error {                                            \
   public:                                                                     \
    using Error::Error;                                                        \
    std::string_view name() const noexcept override { return #Type; }         \
  }

FANO_TUNNEL_DEFINE_ERROR(DomainError);
FANO_TUNNEL_DEFINE_ERROR(QuadratureFailure);
FANO_TUNNEL_DEFINE_ERROR(RootNotBracketed);
FANO_TUNNEL_DEFINE_ERROR(NoRoot);
FANO_TUNNEL_DEFINE_ERROR(MethodUnavailable);
FANO_TUNNEL_DEFINE_ERROR(PositivityViolation);
FANO_TUNNEL_DEFINE_ERROR(GridTooCoarse);
FANO_TUNNEL_DEFINE_ERROR(IntegratorFailure);
FANO_TUNNEL_DEFINE_ERROR(EigenFailure);
FANO_TUNNEL_DEFINE_ERROR(ConfigError);

#undef FANO_TUNNEL_DEFINE_ERROR

}  // namespace fano_tunnel
