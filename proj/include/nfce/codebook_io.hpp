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

#include "codebook.hpp"

#include <string>

namespace nfce
{

/// Binary codebook container:
///   magic "NFCB", u32 version, u8 kind, u8 dtype (0 = complex128,
///   1 = complex64), u16 pad, u32 n_t, u32 n_r, f64 beta, f64 x_hat,
///   f64 y_hat (unused fields NaN), u64 rows, u64 cols, column-major
///   (re, im) payload.
/// codeword_meta goes to a JSON sidecar at `path` + ".meta.json".
struct CodebookFileParams
{
    double beta = std::numeric_limits<double>::quiet_NaN();
    double x_hat = std::numeric_limits<double>::quiet_NaN();
    double y_hat = std::numeric_limits<double>::quiet_NaN();
};

void save_codebook(const Codebook &codebook, const std::string &path,
                   const CodebookFileParams &params = {}, bool complex64 = false);

Codebook load_codebook(const std::string &path, CodebookFileParams *params = nullptr);

} // namespace nfce
