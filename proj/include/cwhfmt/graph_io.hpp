/*
 Copyright 2026 The cwhfmt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef CWHFMT_GRAPH_IO_HPP
#define CWHFMT_GRAPH_IO_HPP

#include "cwhfmt/planner.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace cwhfmt {

class GraphIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FingerprintMismatch : public GraphIoError {
 public:
  using GraphIoError::GraphIoError;
};

/*
 Binary layout, all integers and IEEE-754 doubles little-endian:

   "CWHFMTGD"                       8-byte magic
   u32 format_version, u64 fingerprint, u64 n (total samples),
   u32 d, f64 j_bar, u32 leg count
   per leg:
     f64[6] box lower, f64[6] box upper, u8 planar
     f64[6] goal centre, f64 eps_r, f64 eps_v, i64 goal_index
     u64 n, u64 n_goal, u64 draws, u64 goal_draws
     u64 sample count, f64[6] per sample (row-major)
     per sample certificate:
       u8 safe, u8 reason, u8 has_cam,
       [f64 theta_star, Th, theta_max, tau, f64[3] dv, f64[6] pre, f64[6] post],
       f64[3] prefix_dv, u32 first_failed_mode,
       u32 mode count, ceil(count / 8) bytes of mode bitmap (LSB first)
     u64 edge count, per edge: u32 from, u32 to, f64 T, f64 cost,
       f64[3] dv1, f64[3] dv2
     per sample: u32 count + u32[] forward edge indices
     per sample: u32 count + u32[] backward edge indices
*/
std::string encode_graph(const PrecomputedGraphData& data);
PrecomputedGraphData decode_graph(const std::string& bytes);

nlohmann::json graph_to_json(const PrecomputedGraphData& data);

void save_graph(const std::string& path, const PrecomputedGraphData& data);
/// Writes `path` plus the JSON twin at `json_path`.
void save_graph(const std::string& path, const std::string& json_path,
                const PrecomputedGraphData& data);

/// Throws FingerprintMismatch when `expected` is given and differs.
PrecomputedGraphData load_graph(const std::string& path,
                                std::optional<std::uint64_t> expected = {});

}  // namespace cwhfmt

#endif  // CWHFMT_GRAPH_IO_HPP
