// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The sbhsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sbh
{
    enum class QuadratureMethod
    {
        gk15,
        gk31,
        gk61,
    };

    std::string_view to_string(QuadratureMethod m);
    QuadratureMethod quadrature_method_from_string(std::string_view s);

    struct QuadratureSpec
    {
        QuadratureMethod method = QuadratureMethod::gk31;
        double rel_tol = 1e-6;
        double abs_tol = 1e-12;
        unsigned max_depth = 15;
        double max_truncation = 1e7; // give up extending an improper range past this

        void validate() const;
    };

    struct QuadResult
    {
        double value = 0.0;
        double error = 0.0;
        std::size_t evals = 0;
        double truncation = std::numeric_limits<double>::infinity(); // upper limit actually used
        bool converged = true;
    };

    class QuadratureError : public std::runtime_error
    {
    public:
        QuadratureError(const std::string &what, QuadResult partial) : std::runtime_error(what), partial_(partial) {}
        const QuadResult &partial() const { return partial_; }

    private:
        QuadResult partial_;
    };

    /// Adaptive Gauss-Kronrod on [a, b]. `converged` is false when the error
    /// estimate stays above max(rel_tol |value|, abs_tol).
    QuadResult integrate(const std::function<double(double)> &f, double a, double b, const QuadratureSpec &spec);

    /// Integral over [a, inf). tail(R) must bound the integral over [R, inf);
    /// the range is extended by doubling from `start` until the bound falls
    /// under a tenth of the requested tolerance. Throws QuadratureError if
    /// that never happens below spec.max_truncation.
    QuadResult integrate_upper_tail(const std::function<double(double)> &f, double a, double start,
                                    const std::function<double(double)> &tail, const QuadratureSpec &spec);

    /// Like integrate() but throws QuadratureError when not converged.
    QuadResult integrate_or_throw(const std::function<double(double)> &f, double a, double b,
                                  const QuadratureSpec &spec, std::string_view what);

} // namespace sbh
