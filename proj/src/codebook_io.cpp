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

#include "nfce/codebook_io.hpp"

#include <json.hpp>

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nfce
{

using nlohmann::ordered_json;

namespace
{

constexpr char magic[4] = {'N', 'F', 'C', 'B'};
constexpr std::uint32_t format_version = 1;

template <typename T> void write_pod(std::ofstream &f, const T &v)
{
    f.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T> T read_pod(std::ifstream &f)
{
    T v{};
    f.read(reinterpret_cast<char *>(&v), sizeof(T));
    if (!f)
        throw std::runtime_error("codebook file truncated");
    return v;
}

ordered_json meta_to_json(const CodewordMeta &meta)
{
    return std::visit(
        [](const auto &m) -> ordered_json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DftMeta>)
                return ordered_json{{"tx_angle", m.tx_angle}, {"rx_angle", m.rx_angle}};
            else if constexpr (std::is_same_v<T, SphericalMeta>)
                return ordered_json{{"tx_angle", m.tx_angle},
                                    {"tx_distance", m.tx_distance},
                                    {"rx_angle", m.rx_angle},
                                    {"rx_distance", m.rx_distance},
                                    {"candidate", {m.candidate.x(), m.candidate.y()}}};
            else
                return ordered_json{{"tx_index", m.tx_index},
                                    {"rx_index", m.rx_index},
                                    {"tx_eigenvalue", m.tx_eigenvalue},
                                    {"rx_eigenvalue", m.rx_eigenvalue}};
        },
        meta);
}

CodewordMeta meta_from_json(CodebookKind kind, const ordered_json &j)
{
    switch (kind)
    {
    case CodebookKind::Dft:
        return DftMeta{j.at("tx_angle").get<double>(), j.at("rx_angle").get<double>()};
    case CodebookKind::Spherical:
        return SphericalMeta{j.at("tx_angle").get<double>(),
                             j.at("tx_distance").get<double>(),
                             j.at("rx_angle").get<double>(),
                             j.at("rx_distance").get<double>(),
                             Point{j.at("candidate").at(0).get<double>(),
                                   j.at("candidate").at(1).get<double>()}};
    case CodebookKind::Dpss:
        return DpssMeta{j.at("tx_index").get<int>(), j.at("rx_index").get<int>(),
                        j.at("tx_eigenvalue").get<double>(),
                        j.at("rx_eigenvalue").get<double>()};
    }
    throw std::invalid_argument("meta_from_json: bad kind");
}

} // namespace

void save_codebook(const Codebook &codebook, const std::string &path,
                   const CodebookFileParams &params, bool complex64)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("save_codebook: cannot write " + path);

    f.write(magic, 4);
    write_pod(f, format_version);
    write_pod(f, static_cast<std::uint8_t>(codebook.kind));
    write_pod(f, static_cast<std::uint8_t>(complex64 ? 1 : 0));
    write_pod(f, static_cast<std::uint16_t>(0));
    write_pod(f, static_cast<std::uint32_t>(codebook.n_t));
    write_pod(f, static_cast<std::uint32_t>(codebook.n_r));
    write_pod(f, params.beta);
    write_pod(f, params.x_hat);
    write_pod(f, params.y_hat);
    write_pod(f, static_cast<std::uint64_t>(codebook.matrix.rows()));
    write_pod(f, static_cast<std::uint64_t>(codebook.matrix.cols()));

    if (complex64)
    {
        for (Eigen::Index c = 0; c < codebook.matrix.cols(); ++c)
            for (Eigen::Index r = 0; r < codebook.matrix.rows(); ++r)
            {
                float re = static_cast<float>(codebook.matrix(r, c).real());
                float im = static_cast<float>(codebook.matrix(r, c).imag());
                write_pod(f, re);
                write_pod(f, im);
            }
    }
    else
    {
        // column-major (re, im) doubles; matches the in-memory layout
        f.write(reinterpret_cast<const char *>(codebook.matrix.data()),
                static_cast<std::streamsize>(sizeof(cplx) * codebook.matrix.size()));
    }
    if (!f)
        throw std::runtime_error("save_codebook: write failed for " + path);

    ordered_json meta = ordered_json::array();
    for (const auto &m : codebook.meta)
        meta.push_back(meta_to_json(m));
    ordered_json side{{"kind", to_string(codebook.kind)},
                      {"n_t", codebook.n_t},
                      {"n_r", codebook.n_r},
                      {"codewords", meta}};
    std::ofstream sf(path + ".meta.json", std::ios::binary);
    if (!sf)
        throw std::runtime_error("save_codebook: cannot write " + path + ".meta.json");
    sf << side.dump() << '\n';
}

Codebook load_codebook(const std::string &path, CodebookFileParams *params)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("load_codebook: cannot open " + path);

    char m[4];
    f.read(m, 4);
    if (!f || std::memcmp(m, magic, 4) != 0)
        throw std::runtime_error("load_codebook: bad magic in " + path);
    auto version = read_pod<std::uint32_t>(f);
    if (version != format_version)
        throw std::runtime_error("load_codebook: unsupported version");

    Codebook cb;
    cb.kind = static_cast<CodebookKind>(read_pod<std::uint8_t>(f));
    auto dtype = read_pod<std::uint8_t>(f);
    read_pod<std::uint16_t>(f);
    cb.n_t = static_cast<int>(read_pod<std::uint32_t>(f));
    cb.n_r = static_cast<int>(read_pod<std::uint32_t>(f));
    CodebookFileParams p;
    p.beta = read_pod<double>(f);
    p.x_hat = read_pod<double>(f);
    p.y_hat = read_pod<double>(f);
    if (params)
        *params = p;
    auto rows = static_cast<Eigen::Index>(read_pod<std::uint64_t>(f));
    auto cols = static_cast<Eigen::Index>(read_pod<std::uint64_t>(f));

    cb.matrix.resize(rows, cols);
    if (dtype == 1)
    {
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
            {
                float re = read_pod<float>(f);
                float im = read_pod<float>(f);
                cb.matrix(r, c) = cplx(re, im);
            }
    }
    else
    {
        f.read(reinterpret_cast<char *>(cb.matrix.data()),
               static_cast<std::streamsize>(sizeof(cplx) * cb.matrix.size()));
        if (!f)
            throw std::runtime_error("load_codebook: payload truncated in " + path);
    }

    std::ifstream sf(path + ".meta.json", std::ios::binary);
    if (sf)
    {
        ordered_json side = ordered_json::parse(sf);
        for (const auto &j : side.at("codewords"))
            cb.meta.push_back(meta_from_json(cb.kind, j));
    }
    return cb;
}

} // namespace nfce
