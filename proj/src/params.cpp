#include "socnav/params.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace socnav::nn {

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload is written in native little-endian order");

Tensor ParamStore::add(const std::string& name, Eigen::Index rows, Eigen::Index cols, Init init) {
  if (index_.count(name)) throw std::invalid_argument("duplicate parameter name: " + name);
  ParamEntry e;
  e.name = name;
  e.init = init;
  e.tensor = Tensor::parameter(Matrix::Zero(rows, cols));
  e.m = Matrix::Zero(rows, cols);
  e.v = Matrix::Zero(rows, cols);
  index_[name] = entries_.size();
  entries_.push_back(std::move(e));
  return entries_.back().tensor;
}

const Tensor& ParamStore::get(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("unknown parameter: " + name);
  return entries_[it->second].tensor;
}

std::vector<Matrix> ParamStore::sample_initial(Rng& rng) const {
  std::vector<Matrix> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) {
    const auto& shape = e.tensor.value();
    Matrix m = Matrix::Zero(shape.rows(), shape.cols());
    if (e.init == Init::xavier) {
      const double bound = std::sqrt(6.0 / static_cast<double>(shape.rows() + shape.cols()));
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-bound, bound);
    }
    out.push_back(std::move(m));
  }
  return out;
}

void ParamStore::initialize(Rng& rng) {
  restore(sample_initial(rng));
  reset_moments();
}

void ParamStore::zero_grad() {
  for (auto& e : entries_) {
    if (e.tensor.grad().size() != 0) e.tensor.mutable_grad().setZero();
  }
}

void ParamStore::reset_moments() {
  for (auto& e : entries_) {
    e.m.setZero();
    e.v.setZero();
  }
  adam_steps = 0;
}

std::size_t ParamStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& e : entries_) n += static_cast<std::size_t>(e.tensor.value().size());
  return n;
}

std::vector<Matrix> ParamStore::snapshot() const {
  std::vector<Matrix> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.tensor.value());
  return out;
}

void ParamStore::restore(const std::vector<Matrix>& values) {
  if (values.size() != entries_.size()) throw std::invalid_argument("restore: parameter count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto& dst = entries_[i].tensor.mutable_value();
    if (dst.rows() != values[i].rows() || dst.cols() != values[i].cols()) {
      throw std::invalid_argument("restore: shape mismatch for " + entries_[i].name);
    }
    dst = values[i];
  }
}

void optimizer_step(ParamStore& store, const OptimizerConfig& cfg) {
  store.adam_steps += 1;
  const double t = static_cast<double>(store.adam_steps);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  const double shrink = 1.0 - cfg.lr * cfg.weight_decay;
  for (auto& e : store.entries()) {
    Matrix& theta = e.tensor.mutable_value();
    Matrix g = e.tensor.grad().size() ? e.tensor.grad() : Matrix::Zero(theta.rows(), theta.cols());
    if (cfg.kind == OptimizerKind::adam && cfg.weight_decay != 0.0) g += cfg.weight_decay * theta;
    e.m = cfg.beta1 * e.m + (1.0 - cfg.beta1) * g;
    e.v = cfg.beta2 * e.v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
    if (cfg.kind == OptimizerKind::adamw && cfg.weight_decay != 0.0) theta *= shrink;
    theta.array() -= cfg.lr * (e.m.array() / bc1) / ((e.v.array() / bc2).sqrt() + cfg.eps);
  }
}

// ---------------------------------------------------------------------------

namespace {

void write_block(std::ofstream& bin, const Matrix& m, std::uint64_t& offset) {
  const auto bytes = static_cast<std::streamsize>(m.size() * sizeof(double));
  bin.write(reinterpret_cast<const char*>(m.data()), bytes);
  offset += static_cast<std::uint64_t>(bytes);
}

}  // namespace

void save_checkpoint(const ParamStore& store, const std::map<std::string, std::string>& metadata,
                     const std::filesystem::path& path) {
  const std::filesystem::path payload = path.string() + ".bin";
  std::ofstream bin(payload, std::ios::binary);
  std::ofstream man(path);
  if (!bin || !man) throw std::runtime_error("cannot write checkpoint " + path.string());
  man << "socnav-checkpoint 1\n";
  man << "payload " << payload.filename().string() << "\n";
  man << "adam_steps " << store.adam_steps << "\n";
  for (const auto& [k, v] : metadata) {
    if (k.find_first_of(" \n") != std::string::npos || v.find('\n') != std::string::npos) {
      throw std::invalid_argument("checkpoint metadata must be single-line: " + k);
    }
    man << "meta " << k << " " << v << "\n";
  }
  std::uint64_t offset = 0;
  for (const char* kind : {"param", "moment_m", "moment_v"}) {
    for (const auto& e : store.entries()) {
      const Matrix& m = std::strcmp(kind, "param") == 0 ? e.tensor.value()
                        : std::strcmp(kind, "moment_m") == 0 ? e.m
                                                             : e.v;
      man << kind << " " << e.name << " " << m.rows() << " " << m.cols() << " " << offset << "\n";
      write_block(bin, m, offset);
    }
  }
  if (!bin || !man) throw std::runtime_error("checkpoint write failed: " + path.string());
}

std::map<std::string, std::string> load_checkpoint(ParamStore& store,
                                                   const std::filesystem::path& path) {
  std::ifstream man(path);
  if (!man) throw std::runtime_error("cannot open checkpoint " + path.string());
  std::string line;
  std::getline(man, line);
  if (line != "socnav-checkpoint 1") throw std::runtime_error("not a checkpoint manifest: " + path.string());

  std::map<std::string, std::string> meta;
  std::string payload_name;
  struct Block {
    std::string kind, name;
    Eigen::Index rows, cols;
    std::uint64_t offset;
  };
  std::vector<Block> blocks;
  while (std::getline(man, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "payload") {
      ls >> payload_name;
    } else if (tag == "adam_steps") {
      ls >> store.adam_steps;
    } else if (tag == "meta") {
      std::string key;
      ls >> key;
      std::string rest;
      std::getline(ls, rest);
      meta[key] = rest.empty() ? rest : rest.substr(1);
    } else if (tag == "param" || tag == "moment_m" || tag == "moment_v") {
      Block b;
      b.kind = tag;
      ls >> b.name >> b.rows >> b.cols >> b.offset;
      if (!ls) throw std::runtime_error("malformed manifest line: " + line);
      blocks.push_back(b);
    } else if (!tag.empty()) {
      throw std::runtime_error("unknown manifest entry: " + tag);
    }
  }
  std::ifstream bin(path.parent_path() / payload_name, std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open checkpoint payload " + payload_name);

  std::size_t seen = 0;
  for (const auto& b : blocks) {
    if (!store.contains(b.name)) throw std::runtime_error("checkpoint has unknown parameter " + b.name);
    auto& entry = *std::find_if(store.entries().begin(), store.entries().end(),
                                [&](const ParamEntry& e) { return e.name == b.name; });
    Matrix& dst = b.kind == "param" ? entry.tensor.mutable_value() : b.kind == "moment_m" ? entry.m : entry.v;
    if (dst.rows() != b.rows || dst.cols() != b.cols) {
      throw std::runtime_error("checkpoint shape mismatch for " + b.name);
    }
    bin.seekg(static_cast<std::streamoff>(b.offset));
    bin.read(reinterpret_cast<char*>(dst.data()), static_cast<std::streamsize>(dst.size() * sizeof(double)));
    if (!bin) throw std::runtime_error("truncated checkpoint payload at " + b.name);
    if (b.kind == "param") ++seen;
  }
  if (seen != store.size()) throw std::runtime_error("checkpoint is missing parameters");
  return meta;
}

}  // namespace socnav::nn
