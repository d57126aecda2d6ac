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

#include "cwhfmt/graph_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace cwhfmt {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'C', 'W', 'H', 'F', 'M', 'T', 'G', 'D'};

static_assert(std::endian::native == std::endian::little,
              "graph encoding assumes a little-endian host");

class Writer {
 public:
  template <typename T>
  void put(T v) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    out_.append(b, sizeof(T));
  }
  void u8(std::uint8_t v) { put(v); }
  void u32(std::uint32_t v) { put(v); }
  void u64(std::uint64_t v) { put(v); }
  void i64(std::int64_t v) { put(v); }
  void f64(double v) { put(v); }
  template <typename Derived>
  void vec(const Eigen::MatrixBase<Derived>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) f64(v(i));
  }
  void raw(const char* p, std::size_t n) { out_.append(p, n); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& in) : in_(in) {}
  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > in_.size()) throw GraphIoError("graph file truncated");
    T v;
    std::memcpy(&v, in_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::uint8_t u8() { return get<std::uint8_t>(); }
  std::uint32_t u32() { return get<std::uint32_t>(); }
  std::uint64_t u64() { return get<std::uint64_t>(); }
  std::int64_t i64() { return get<std::int64_t>(); }
  double f64() { return get<double>(); }
  template <int N>
  Eigen::Matrix<double, N, 1> vec() {
    Eigen::Matrix<double, N, 1> v;
    for (int i = 0; i < N; ++i) v(i) = f64();
    return v;
  }
  void bytes(char* p, std::size_t n) {
    if (pos_ + n > in_.size()) throw GraphIoError("graph file truncated");
    std::memcpy(p, in_.data() + pos_, n);
    pos_ += n;
  }
  // Guards count fields against allocating absurd amounts on corrupt input.
  std::uint64_t count(std::size_t min_bytes_each) {
    const std::uint64_t n = u64();
    if (min_bytes_each > 0 && n > (in_.size() - pos_) / min_bytes_each) {
      throw GraphIoError("graph file corrupt: count exceeds payload");
    }
    return n;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  const std::string& in_;
  std::size_t pos_ = 0;
};

void write_cert(Writer& w, const CamCertificate& c) {
  w.u8(c.safe ? 1 : 0);
  w.u8(static_cast<std::uint8_t>(c.reason));
  w.u8(c.cam ? 1 : 0);
  if (c.cam) {
    w.f64(c.cam->theta_star);
    w.f64(c.cam->Th);
    w.f64(c.cam->theta_max);
    w.f64(c.cam->dv_circ.tau);
    w.vec(c.cam->dv_circ.dv);
    w.vec(c.cam->pre_burn);
    w.vec(c.cam->post_state);
  }
  w.vec(c.prefix_dv);
  w.u32(c.first_failed_mode);
  w.u32(static_cast<std::uint32_t>(c.mode_ok.size()));
  std::string bits((c.mode_ok.size() + 7) / 8, '\0');
  for (std::size_t i = 0; i < c.mode_ok.size(); ++i) {
    if (c.mode_ok[i]) bits[i / 8] = static_cast<char>(bits[i / 8] | (1 << (i % 8)));
  }
  w.raw(bits.data(), bits.size());
}

CamCertificate read_cert(Reader& r) {
  CamCertificate c;
  c.safe = r.u8() != 0;
  const std::uint8_t reason = r.u8();
  if (reason > static_cast<std::uint8_t>(CamFailure::PlumeImpingement)) {
    throw GraphIoError("graph file corrupt: bad certificate reason");
  }
  c.reason = static_cast<CamFailure>(reason);
  if (r.u8()) {
    CamResult cam;
    cam.theta_star = r.f64();
    cam.Th = r.f64();
    cam.theta_max = r.f64();
    cam.dv_circ.tau = r.f64();
    cam.dv_circ.dv = r.vec<3>();
    cam.pre_burn = r.vec<6>();
    cam.post_state = r.vec<6>();
    c.cam = cam;
  }
  c.prefix_dv = r.vec<3>();
  c.first_failed_mode = r.u32();
  const std::uint32_t m = r.u32();
  std::string bits((m + 7) / 8, '\0');
  r.bytes(bits.data(), bits.size());
  c.mode_ok.resize(m);
  for (std::uint32_t i = 0; i < m; ++i) {
    c.mode_ok[i] = (static_cast<unsigned char>(bits[i / 8]) >> (i % 8)) & 1u;
  }
  return c;
}

void write_lists(Writer& w, const std::vector<std::vector<std::uint32_t>>& lists) {
  for (const auto& l : lists) {
    w.u32(static_cast<std::uint32_t>(l.size()));
    for (std::uint32_t e : l) w.u32(e);
  }
}

std::vector<std::vector<std::uint32_t>> read_lists(Reader& r, std::size_t n,
                                                   std::size_t n_edges) {
  std::vector<std::vector<std::uint32_t>> lists(n);
  for (auto& l : lists) {
    const std::uint32_t k = r.u32();
    if (k > n_edges) throw GraphIoError("graph file corrupt: neighbor list too long");
    l.resize(k);
    for (auto& e : l) {
      e = r.u32();
      if (e >= n_edges) throw GraphIoError("graph file corrupt: edge index out of range");
    }
  }
  return lists;
}

template <int N>
json arr(const Eigen::Matrix<double, N, 1>& v) {
  json a = json::array();
  for (int i = 0; i < N; ++i) a.push_back(v(i));
  return a;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphIoError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw GraphIoError("cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw GraphIoError("write failed for '" + path + "'");
}

}  // namespace

std::string encode_graph(const PrecomputedGraphData& data) {
  Writer w;
  w.raw(kMagic, sizeof(kMagic));
  w.u32(PrecomputedGraphData::kFormatVersion);
  w.u64(data.fingerprint);
  w.u64(data.total_samples());
  w.u32(data.d);
  w.f64(data.j_bar);
  w.u32(static_cast<std::uint32_t>(data.legs.size()));
  for (const auto& leg : data.legs) {
    w.vec(leg.space.box.lower);
    w.vec(leg.space.box.upper);
    w.u8(leg.space.planar ? 1 : 0);
    w.vec(leg.goal.center);
    w.f64(leg.goal.eps_r);
    w.f64(leg.goal.eps_v);
    w.i64(leg.goal_index);
    const SampleSet& s = leg.samples;
    w.u64(s.n);
    w.u64(s.n_goal);
    w.u64(s.draws);
    w.u64(s.goal_draws);
    w.u64(s.states.size());
    for (const auto& x : s.states) w.vec(x);
    for (const auto& c : s.certificates) write_cert(w, c);
    w.u64(leg.nbrs.edges.size());
    for (const auto& e : leg.nbrs.edges) {
      w.u32(e.from);
      w.u32(e.to);
      w.f64(e.sol.T);
      w.f64(e.sol.cost);
      w.vec(e.sol.dv1.dv);
      w.vec(e.sol.dv2.dv);
    }
    write_lists(w, leg.nbrs.fwd);
    write_lists(w, leg.nbrs.bwd);
  }
  return w.take();
}

PrecomputedGraphData decode_graph(const std::string& bytes) {
  Reader r(bytes);
  char magic[sizeof(kMagic)];
  r.bytes(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw GraphIoError("not a cwhfmt graph file");
  const std::uint32_t version = r.u32();
  if (version != PrecomputedGraphData::kFormatVersion) {
    throw GraphIoError("unsupported graph format version " + std::to_string(version));
  }
  PrecomputedGraphData d;
  d.fingerprint = r.u64();
  const std::uint64_t n_total = r.u64();
  d.d = r.u32();
  d.j_bar = r.f64();
  const std::uint32_t n_legs = r.u32();
  for (std::uint32_t l = 0; l < n_legs; ++l) {
    LegData leg;
    leg.space.box.lower = r.vec<6>();
    leg.space.box.upper = r.vec<6>();
    leg.space.planar = r.u8() != 0;
    leg.goal.center = r.vec<6>();
    leg.goal.eps_r = r.f64();
    leg.goal.eps_v = r.f64();
    leg.goal_index = r.i64();
    SampleSet& s = leg.samples;
    s.n = r.u64();
    s.n_goal = r.u64();
    s.draws = r.u64();
    s.goal_draws = r.u64();
    const std::uint64_t ns = r.count(48);
    s.states.resize(ns);
    for (auto& x : s.states) x = r.vec<6>();
    s.certificates.reserve(ns);
    for (std::uint64_t i = 0; i < ns; ++i) s.certificates.push_back(read_cert(r));
    if (leg.goal_index >= static_cast<std::int64_t>(ns)) {
      throw GraphIoError("graph file corrupt: goal index out of range");
    }
    const std::uint64_t ne = r.count(72);
    leg.nbrs.edges.resize(ne);
    for (auto& e : leg.nbrs.edges) {
      e.from = r.u32();
      e.to = r.u32();
      if (e.from >= ns || e.to >= ns) throw GraphIoError("graph file corrupt: edge endpoint");
      e.sol.T = r.f64();
      e.sol.cost = r.f64();
      e.sol.dv1 = Impulse{r.vec<3>(), 0.0};
      e.sol.dv2 = Impulse{r.vec<3>(), e.sol.T};
    }
    leg.nbrs.fwd = read_lists(r, ns, ne);
    leg.nbrs.bwd = read_lists(r, ns, ne);
    d.legs.push_back(std::move(leg));
  }
  if (!r.done()) throw GraphIoError("graph file corrupt: trailing bytes");
  if (n_total != d.total_samples()) throw GraphIoError("graph file corrupt: sample count");
  return d;
}

json graph_to_json(const PrecomputedGraphData& data) {
  json j;
  j["format_version"] = PrecomputedGraphData::kFormatVersion;
  std::ostringstream fp;
  fp << std::hex << data.fingerprint;
  j["fingerprint"] = fp.str();
  j["n"] = data.total_samples();
  j["d"] = data.d;
  j["j_bar"] = data.j_bar;
  json legs = json::array();
  for (const auto& leg : data.legs) {
    json L;
    L["box_lower"] = arr<6>(leg.space.box.lower);
    L["box_upper"] = arr<6>(leg.space.box.upper);
    L["planar"] = leg.space.planar;
    L["goal"] = {{"center", arr<6>(leg.goal.center)},
                 {"eps_r", leg.goal.eps_r},
                 {"eps_v", leg.goal.eps_v},
                 {"index", leg.goal_index}};
    L["n"] = leg.samples.n;
    L["n_goal"] = leg.samples.n_goal;
    L["draws"] = leg.samples.draws;
    L["goal_draws"] = leg.samples.goal_draws;
    json samples = json::array();
    for (std::size_t i = 0; i < leg.samples.states.size(); ++i) {
      const CamCertificate& c = leg.samples.certificates[i];
      json cert = {{"safe", c.safe},
                   {"reason", std::string(to_string(c.reason))},
                   {"prefix_dv", arr<3>(c.prefix_dv)},
                   {"first_failed_mode", c.first_failed_mode},
                   {"modes_ok", c.feasible_count()},
                   {"modes", c.mode_ok.size()}};
      if (c.cam) {
        cert["cam"] = {{"theta_star", c.cam->theta_star},
                       {"Th", c.cam->Th},
                       {"theta_max", c.cam->theta_max},
                       {"dv", arr<3>(c.cam->dv_circ.dv)},
                       {"pre_burn", arr<6>(c.cam->pre_burn)},
                       {"post_state", arr<6>(c.cam->post_state)}};
      }
      samples.push_back({{"state", arr<6>(leg.samples.states[i])},
                         {"certificate", cert},
                         {"fwd", leg.nbrs.fwd[i]},
                         {"bwd", leg.nbrs.bwd[i]}});
    }
    L["samples"] = samples;
    json edges = json::array();
    for (const auto& e : leg.nbrs.edges) {
      edges.push_back({{"from", e.from},
                       {"to", e.to},
                       {"T", e.sol.T},
                       {"cost", e.sol.cost},
                       {"dv1", arr<3>(e.sol.dv1.dv)},
                       {"dv2", arr<3>(e.sol.dv2.dv)}});
    }
    L["edges"] = edges;
    legs.push_back(L);
  }
  j["legs"] = legs;
  return j;
}

void save_graph(const std::string& path, const PrecomputedGraphData& data) {
  write_file(path, encode_graph(data));
}

void save_graph(const std::string& path, const std::string& json_path,
                const PrecomputedGraphData& data) {
  save_graph(path, data);
  write_file(json_path, graph_to_json(data).dump(1) + "\n");
}

PrecomputedGraphData load_graph(const std::string& path, std::optional<std::uint64_t> expected) {
  PrecomputedGraphData d = decode_graph(read_file(path));
  if (expected && *expected != d.fingerprint) {
    std::ostringstream msg;
    msg << "graph fingerprint " << std::hex << d.fingerprint << " does not match scenario "
        << *expected << "; re-run precompute";
    throw FingerprintMismatch(msg.str());
  }
  return d;
}

}  // namespace cwhfmt
