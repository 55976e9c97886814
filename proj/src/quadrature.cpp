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

#include "sbh/quadrature.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace sbh
{
    std::string_view to_string(QuadratureMethod m)
    {
        switch (m)
        {
        case QuadratureMethod::gk15:
            return "gk15";
        case QuadratureMethod::gk31:
            return "gk31";
        case QuadratureMethod::gk61:
            return "gk61";
        }
        return "unknown";
    }

    QuadratureMethod quadrature_method_from_string(std::string_view s)
    {
        if (s == "gk15")
            return QuadratureMethod::gk15;
        if (s == "gk31")
            return QuadratureMethod::gk31;
        if (s == "gk61")
            return QuadratureMethod::gk61;
        throw std::invalid_argument("unknown quadrature method: " + std::string(s));
    }

    void QuadratureSpec::validate() const
    {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw std::invalid_argument("quadrature tolerances must be positive");
        if (max_depth == 0)
            throw std::invalid_argument("quadrature depth must be positive");
    }

    namespace
    {
        template <unsigned Points>
        QuadResult gk(const std::function<double(double)> &f, double a, double b, const QuadratureSpec &spec)
        {
            QuadResult r;
            auto counted = [&](double x) {
                ++r.evals;
                return f(x);
            };
            double l1 = 0.0;
            r.value = boost::math::quadrature::gauss_kronrod<double, Points>::integrate(counted, a, b, spec.max_depth,
                                                                                          spec.rel_tol, &r.error, &l1);
            r.truncation = b;
            r.converged = std::isfinite(r.value) && r.error <= std::max(spec.rel_tol * l1, spec.abs_tol) * 10.0;
            return r;
        }
    } // namespace

    QuadResult integrate(const std::function<double(double)> &f, double a, double b, const QuadratureSpec &spec)
    {
        spec.validate();
        if (a == b)
        {
            QuadResult r;
            r.truncation = b;
            return r;
        }
        switch (spec.method)
        {
        case QuadratureMethod::gk15:
            return gk<15>(f, a, b, spec);
        case QuadratureMethod::gk31:
            return gk<31>(f, a, b, spec);
        case QuadratureMethod::gk61:
            return gk<61>(f, a, b, spec);
        }
        return {};
    }

    QuadResult integrate_or_throw(const std::function<double(double)> &f, double a, double b,
                                  const QuadratureSpec &spec, std::string_view what)
    {
        QuadResult r = integrate(f, a, b, spec);
        if (!r.converged)
        {
            std::ostringstream os;
            os << what << ": quadrature did not converge on [" << a << ", " << b << "], value " << r.value
               << ", error estimate " << r.error << ", " << r.evals << " evaluations";
            throw QuadratureError(os.str(), r);
        }
        return r;
    }

    QuadResult integrate_upper_tail(const std::function<double(double)> &f, double a, double start,
                                    const std::function<double(double)> &tail, const QuadratureSpec &spec)
    {
        double upper = std::max(start, a);
        if (!(upper > 0.0))
            throw std::invalid_argument("improper integral needs a positive starting truncation");
        QuadResult acc = integrate_or_throw(f, a, upper, spec, "improper integral");
        for (;;)
        {
            const double bound = tail(upper);
            if (bound <= std::max(spec.rel_tol * std::abs(acc.value), spec.abs_tol) / 10.0)
                break;
            if (upper >= spec.max_truncation)
            {
                std::ostringstream os;
                os << "improper integral: tail bound " << bound << " at truncation " << upper
                   << " still above tolerance";
                acc.converged = false;
                throw QuadratureError(os.str(), acc);
            }
            const double next = 2.0 * upper;
            const QuadResult piece = integrate_or_throw(f, upper, next, spec, "improper integral");
            acc.value += piece.value;
            acc.error += piece.error;
            acc.evals += piece.evals;
            upper = next;
        }
        acc.truncation = upper;
        return acc;
    }

} // namespace sbh
