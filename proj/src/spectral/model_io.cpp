#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include <zlib.h>

#include "veriq/spectral/model.hpp"

namespace veriq::spectral {

static_assert(std::endian::native == std::endian::little, "model container assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'V', 'E', 'R', 'I', 'Q', 'K', 'B', '\0'};
constexpr std::uint32_t kFlagSpectral = 1u;

class Writer {
 public:
  template <typename T>
  void Put(T value) {
    const auto* p = reinterpret_cast<const char*>(&value);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void PutString(const std::string& s) {
    Put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
  }
  template <typename T>
  void PutArray(const T* data, std::size_t count) {
    const auto* p = reinterpret_cast<const char*>(data);
    buf_.insert(buf_.end(), p, p + count * sizeof(T));
  }
  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  template <typename T>
  T Get() {
    T value;
    Need(sizeof(T));
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string GetString() {
    auto size = Get<std::uint32_t>();
    Need(size);
    std::string s(data_.substr(pos_, size));
    pos_ += size;
    return s;
  }
  template <typename T>
  void GetArray(T* out, std::size_t count) {
    Need(count * sizeof(T));
    std::memcpy(out, data_.data() + pos_, count * sizeof(T));
    pos_ += count * sizeof(T);
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void Need(std::size_t bytes) const {
    if (bytes > data_.size() - pos_) throw Error(ErrorCode::kFormat, "model container is truncated");
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

std::string EncodePayload(const KnowledgeModel& model, bool with_spectral) {
  Writer w;
  const auto& vocab = model.vocabulary;
  w.Put<std::uint64_t>(vocab.concept_count());
  for (std::size_t i = 0; i < vocab.concept_count(); ++i) {
    w.PutString(vocab.concept_at(i));
    w.Put<std::uint64_t>(vocab.degree(i));
  }
  w.Put<std::uint64_t>(vocab.feature_count());
  for (const auto& f : vocab.features()) {
    w.Put<std::uint8_t>(static_cast<std::uint8_t>(f.direction));
    w.PutString(f.relation);
    w.PutString(f.concept_name);
  }

  const auto& m = model.matrix;
  w.Put<std::uint64_t>(m.rows);
  w.Put<std::uint64_t>(m.cols);
  w.Put<std::uint64_t>(m.nonzeros());
  w.PutArray(m.row_ptr.data(), m.row_ptr.size());
  w.PutArray(m.col_index.data(), m.col_index.size());
  w.PutArray(m.values.data(), m.values.size());

  if (with_spectral) {
    const auto& sp = model.spectral;
    w.Put<std::uint64_t>(sp.rank());
    w.Put<std::uint64_t>(sp.seed);
    w.Put<double>(sp.tolerance);
    w.Put<std::uint64_t>(sp.iterations);
    w.PutArray(sp.s.data(), static_cast<std::size_t>(sp.s.size()));
    w.PutArray(sp.u.data(), static_cast<std::size_t>(sp.u.size()));
    w.PutArray(sp.v.data(), static_cast<std::size_t>(sp.v.size()));
  }
  return w.bytes();
}

std::uint32_t Crc(const std::string& payload) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t pos = 0;
  while (pos < payload.size()) {
    auto chunk = static_cast<uInt>(std::min<std::size_t>(payload.size() - pos, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(payload.data() + pos), chunk);
    pos += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::uint32_t ModelChecksum(const KnowledgeModel& model) {
  return Crc(EncodePayload(model, model.spectral.rank() > 0));
}

void SaveModel(const KnowledgeModel& model, const std::string& path) {
  const bool with_spectral = model.spectral.rank() > 0;
  const std::string payload = EncodePayload(model, with_spectral);
  Writer header;
  header.PutArray(kMagic, sizeof(kMagic));
  header.Put<std::uint32_t>(kContainerVersion);
  header.Put<std::uint32_t>(with_spectral ? kFlagSpectral : 0u);
  header.Put<std::uint64_t>(payload.size());
  header.Put<std::uint32_t>(Crc(payload));

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write model file: " + path);
    out.write(header.bytes().data(), static_cast<std::streamsize>(header.bytes().size()));
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw Error(ErrorCode::kIo, "short write on model file: " + path);
  }
  std::filesystem::rename(tmp, path);
}

KnowledgeModel LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model file: " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  Reader header(data);
  char magic[8];
  header.GetArray(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw Error(ErrorCode::kFormat, "not a model container: " + path);
  }
  auto version = header.Get<std::uint32_t>();
  if (version != kContainerVersion) {
    throw Error(ErrorCode::kFormat, "unsupported model container version " + std::to_string(version));
  }
  auto flags = header.Get<std::uint32_t>();
  auto payload_size = header.Get<std::uint64_t>();
  auto crc = header.Get<std::uint32_t>();
  constexpr std::size_t kHeaderBytes = 8 + 4 + 4 + 8 + 4;
  if (data.size() - kHeaderBytes != payload_size) throw Error(ErrorCode::kFormat, "model payload size mismatch");
  const std::string payload = data.substr(kHeaderBytes);
  if (Crc(payload) != crc) throw Error(ErrorCode::kFormat, "model checksum mismatch: " + path);

  Reader r(payload);
  KnowledgeModel model;
  auto n_concepts = r.Get<std::uint64_t>();
  std::vector<std::string> concepts(n_concepts);
  std::vector<std::size_t> degrees(n_concepts);
  for (std::uint64_t i = 0; i < n_concepts; ++i) {
    concepts[i] = r.GetString();
    degrees[i] = r.Get<std::uint64_t>();
  }
  auto n_features = r.Get<std::uint64_t>();
  std::vector<kb::Feature> features(n_features);
  for (auto& f : features) {
    auto dir = r.Get<std::uint8_t>();
    if (dir > 1) throw Error(ErrorCode::kFormat, "bad feature direction in model container");
    f.direction = static_cast<kb::Direction>(dir);
    f.relation = r.GetString();
    f.concept_name = r.GetString();
  }
  model.vocabulary = kb::Vocabulary(std::move(concepts), std::move(degrees), std::move(features));

  auto& m = model.matrix;
  m.rows = r.Get<std::uint64_t>();
  m.cols = r.Get<std::uint64_t>();
  auto nnz = r.Get<std::uint64_t>();
  m.row_ptr.resize(m.rows + 1);
  m.col_index.resize(nnz);
  m.values.resize(nnz);
  r.GetArray(m.row_ptr.data(), m.row_ptr.size());
  r.GetArray(m.col_index.data(), m.col_index.size());
  r.GetArray(m.values.data(), m.values.size());
  if (m.rows != n_concepts || m.cols != n_features || m.row_ptr.back() != nnz) {
    throw Error(ErrorCode::kFormat, "matrix block does not match vocabulary");
  }

  if (flags & kFlagSpectral) {
    auto& sp = model.spectral;
    auto k = static_cast<Eigen::Index>(r.Get<std::uint64_t>());
    sp.seed = r.Get<std::uint64_t>();
    sp.tolerance = r.Get<double>();
    sp.iterations = r.Get<std::uint64_t>();
    sp.s.resize(k);
    sp.u.resize(static_cast<Eigen::Index>(m.rows), k);
    sp.v.resize(static_cast<Eigen::Index>(m.cols), k);
    r.GetArray(sp.s.data(), static_cast<std::size_t>(sp.s.size()));
    r.GetArray(sp.u.data(), static_cast<std::size_t>(sp.u.size()));
    r.GetArray(sp.v.data(), static_cast<std::size_t>(sp.v.size()));
  }
  if (!r.done()) throw Error(ErrorCode::kFormat, "trailing bytes in model container");
  return model;
}

}  // namespace veriq::spectral
