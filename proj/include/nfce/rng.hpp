// SPDX-License-Identifier: Apache-2.0
//
// nfce - near-field XL-MIMO channel estimation library
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

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace nfce
{

// Portable seeded generator. mt19937_64 is fully specified by the standard and
// the transforms below avoid std::*_distribution, so streams are identical
// across platforms and library versions.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // uniform in [0, 1)
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform in [0, 2*pi)
    double phase()
    {
        return 2.0 * M_PI * uniform();
    }

    // standard normal via Box-Muller
    double normal()
    {
        if (have_spare_)
        {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform(); // (0, 1]
        double u2 = uniform();
        double rad = std::sqrt(-2.0 * std::log(u1));
        have_spare_ = true;
        spare_ = rad * std::sin(2.0 * M_PI * u2);
        return rad * std::cos(2.0 * M_PI * u2);
    }

    // circularly-symmetric complex Gaussian with total variance `var`
    // (real and imaginary parts i.i.d. N(0, var/2))
    std::complex<double> complex_normal(double var)
    {
        double s = std::sqrt(var / 2.0);
        double re = s * normal();
        double im = s * normal();
        return {re, im};
    }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// SplitMix64 step, used to mix substream identifiers into a master seed.
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Documented seed scheme: seed = mix(mix(mix(master ^ a) ^ b) ^ c).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0)
{
    return splitmix64(splitmix64(splitmix64(master ^ a) ^ b) ^ c);
}

} // namespace nfce
