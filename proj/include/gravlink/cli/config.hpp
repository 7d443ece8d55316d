#pragma once

// Scenario file ingestion. Every schema error names the config line of the key it
// concerns ("<file>:<line>: message").

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gravlink/bmv.hpp"
#include "gravlink/frames.hpp"
#include "gravlink/tensorkit.hpp"

namespace gravlink::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

// Forward iterator over a buffer that counts the newlines it walks past.
class LineCountingIterator {
 public:
  using iterator_category = std::forward_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  LineCountingIterator() = default;
  LineCountingIterator(const char* p, std::size_t* line) : p_(p), line_(line) {}

  reference operator*() const { return *p_; }
  LineCountingIterator& operator++() {
    if (*p_ == '\n') ++*line_;
    ++p_;
    return *this;
  }
  LineCountingIterator operator++(int) {
    LineCountingIterator old = *this;
    ++*this;
    return old;
  }
  bool operator==(const LineCountingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const LineCountingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_ = nullptr;
  std::size_t* line_ = nullptr;
};

// Records the line of every object key, keyed by JSON pointer.
class KeyLineRecorder : public nlohmann::json_sax<nlohmann::json> {
 public:
  explicit KeyLineRecorder(const std::size_t* line) : line_(line) {}

  std::map<std::string, std::size_t> lines;

  bool null() override { return value(); }
  bool boolean(bool) override { return value(); }
  bool number_integer(number_integer_t) override { return value(); }
  bool number_unsigned(number_unsigned_t) override { return value(); }
  bool number_float(number_float_t, const string_t&) override { return value(); }
  bool string(string_t&) override { return value(); }
  bool binary(binary_t&) override { return value(); }
  bool start_object(std::size_t) override {
    stack_.push_back({true, "", 0});
    return true;
  }
  bool key(string_t& k) override {
    stack_.back().key = k;
    lines[pointer()] = *line_ + 1;
    return true;
  }
  bool end_object() override {
    stack_.pop_back();
    return value();
  }
  bool start_array(std::size_t) override {
    stack_.push_back({false, "", 0});
    return true;
  }
  bool end_array() override {
    stack_.pop_back();
    return value();
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

 private:
  struct Frame {
    bool object;
    std::string key;
    std::size_t index;
  };

  std::string pointer() const {
    std::string p;
    for (const Frame& f : stack_) p += "/" + (f.object ? f.key : std::to_string(f.index));
    return p;
  }
  bool value() {
    if (!stack_.empty() && !stack_.back().object) ++stack_.back().index;
    return true;
  }

  const std::size_t* line_;
  std::vector<Frame> stack_;
};

}  // namespace detail

// Parsed document plus the line of every key.
struct ConfigDocument {
  std::string source;
  nlohmann::json root;
  std::map<std::string, std::size_t> key_lines;

  std::size_t line_of(const std::string& pointer) const {
    std::string p = pointer;
    while (!p.empty()) {
      const auto it = key_lines.find(p);
      if (it != key_lines.end()) return it->second;
      p = p.substr(0, p.rfind('/'));
    }
    return 1;
  }

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    throw ConfigError(source, line_of(pointer), message);
  }
};

inline ConfigDocument parse_config_text(const std::string& text, const std::string& source = "<config>") {
  ConfigDocument doc;
  doc.source = source;
  try {
    doc.root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // byte offset -> line
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw ConfigError(source, line, std::string("malformed JSON: ") + e.what());
  }
  std::size_t newlines = 0;
  detail::KeyLineRecorder rec(&newlines);
  const char* begin = text.data();
  nlohmann::json::sax_parse(detail::LineCountingIterator(begin, &newlines),
                            detail::LineCountingIterator(begin + text.size(), &newlines), &rec);
  doc.key_lines = std::move(rec.lines);
  if (!doc.root.is_object()) throw ConfigError(source, 1, "config root must be a JSON object");
  return doc;
}

// Typed accessors over one object of the document; unknown keys are rejected.
class ObjectReader {
 public:
  ObjectReader(const ConfigDocument& doc, const nlohmann::json& obj, std::string pointer)
      : doc_(doc), obj_(obj), pointer_(std::move(pointer)) {
    if (!obj_.is_object()) doc_.fail(pointer_, name() + " must be an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }
  std::string child(const std::string& key) const { return pointer_ + "/" + key; }

  const nlohmann::json& at(const std::string& key) {
    seen_.insert(key);
    if (!obj_.contains(key)) doc_.fail(pointer_, "missing required key '" + qualified(key) + "'");
    return obj_.at(key);
  }

  double number(const std::string& key) { return as_number(at(key), key); }

  double number_or(const std::string& key, double fallback) {
    if (!has(key)) {
      seen_.insert(key);
      return fallback;
    }
    return number(key);
  }

  long long integer(const std::string& key) {
    const nlohmann::json& v = at(key);
    if (!v.is_number_integer()) doc_.fail(child(key), "'" + qualified(key) + "' must be an integer");
    return v.get<long long>();
  }

  long long integer_or(const std::string& key, long long fallback) {
    if (!has(key)) {
      seen_.insert(key);
      return fallback;
    }
    return integer(key);
  }

  std::string string(const std::string& key) {
    const nlohmann::json& v = at(key);
    if (!v.is_string()) doc_.fail(child(key), "'" + qualified(key) + "' must be a string");
    return v.get<std::string>();
  }

  Vec3 vec3(const std::string& key) {
    const nlohmann::json& v = at(key);
    if (!v.is_array() || v.size() != 3) doc_.fail(child(key), "'" + qualified(key) + "' must be an array of 3 numbers");
    return {as_number(v[0], key), as_number(v[1], key), as_number(v[2], key)};
  }

  std::vector<double> numbers(const std::string& key) {
    const nlohmann::json& v = at(key);
    if (!v.is_array()) doc_.fail(child(key), "'" + qualified(key) + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(as_number(e, key));
    return out;
  }

  ObjectReader object(const std::string& key) { return {doc_, at(key), child(key)}; }

  void forbid(const std::string& key, const std::string& why) {
    if (has(key)) doc_.fail(child(key), "'" + qualified(key) + "' " + why);
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const { doc_.fail(child(key), message); }

  // Rejects keys nobody asked for.
  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) doc_.fail(child(it.key()), "unknown key '" + qualified(it.key()) + "'");
  }

 private:
  std::string name() const { return pointer_.empty() ? "config root" : "'" + pointer_.substr(1) + "'"; }
  std::string qualified(const std::string& key) const {
    std::string p = pointer_.empty() ? key : pointer_.substr(1) + "/" + key;
    std::replace(p.begin(), p.end(), '/', '.');
    return p;
  }

  double as_number(const nlohmann::json& v, const std::string& key) const {
    if (!v.is_number()) doc_.fail(child(key), "'" + qualified(key) + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) doc_.fail(child(key), "'" + qualified(key) + "' must be finite");
    return d;
  }

  const ConfigDocument& doc_;
  const nlohmann::json& obj_;
  std::string pointer_;
  std::set<std::string> seen_;
};

enum class GeometryMode { positions, d1d2 };

struct GeometrySpec {
  GeometryMode mode = GeometryMode::positions;
  BranchPositions positions;
  double d1 = 0.0;
  double d2 = 0.0;
};

struct BoostSpec {
  double beta = 0.0;
  Vec3 axis{};
  bool axis_given = false;
  QuantizationModel model = QuantizationModel::scalar_plus_vector;
};

struct BellSpec {
  double gamma_final = 1.0;
};

struct ModesumSpec {
  std::vector<double> wavenumbers;
  double volume = 1.0;
  int fock_cutoff = 12;
  int samples = 16;
  std::optional<double> t_end;
  std::optional<Vec3> axis;
  std::size_t budget = std::size_t{1} << 14;
};

struct ScenarioFile {
  std::string source;
  PhysicalConstants constants;
  double mass = 0.0;
  double tau = 0.0;
  GeometrySpec geometry;
  std::optional<BoostSpec> boost;
  std::optional<BellSpec> bell;
  std::optional<ModesumSpec> modesum;
  // Line of each key in the source text, for error messages raised after parsing.
  std::map<std::string, std::size_t> key_lines;

  std::size_t line_of(const std::string& pointer) const {
    const auto it = key_lines.find(pointer);
    return it == key_lines.end() ? 1 : it->second;
  }

  BmvScenario scenario() const {
    if (geometry.mode == GeometryMode::d1d2)
      return BmvScenario::from_d1d2(mass, tau, geometry.d1, geometry.d2, constants);
    return {mass, tau, geometry.positions, constants};
  }

  // Unit vector from l2 to l1.
  Vec3 separation_axis() const {
    const BranchPositions p = scenario().positions();
    const Vec3 d = p.l1 - p.l2;
    return (1.0 / norm(d)) * d;
  }
};

namespace detail {

inline Vec3 unit(const Vec3& v) { return (1.0 / norm(v)) * v; }

// Some unit vector orthogonal to n.
inline Vec3 perpendicular_to(const Vec3& n) {
  const Vec3 trial = std::abs(n[2]) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
  const Vec3 v = trial - dot(trial, n) * n;
  return unit(v);
}

}  // namespace detail

inline ScenarioFile load_scenario(const ConfigDocument& doc) {
  ScenarioFile f;
  f.source = doc.source;
  f.key_lines = doc.key_lines;
  ObjectReader root(doc, doc.root, "");

  if (root.has("constants")) {
    ObjectReader c = root.object("constants");
    f.constants.G = c.number_or("G", 1.0);
    f.constants.c = c.number_or("c", 1.0);
    f.constants.hbar = c.number_or("hbar", 1.0);
    c.finish();
    try {
      f.constants.validate();
    } catch (const DomainError& e) {
      root.fail("constants", e.what());
    }
  }

  f.mass = root.number("mass");
  if (f.mass < 0.0) root.fail("mass", "'mass' must be non-negative");
  f.tau = root.number("tau");
  if (f.tau < 0.0) root.fail("tau", "'tau' must be non-negative");

  {
    ObjectReader g = root.object("geometry");
    const std::string mode = g.string("mode");
    if (mode == "positions") {
      f.geometry.mode = GeometryMode::positions;
      g.forbid("d1", "is only valid in d1d2 mode");
      g.forbid("d2", "is only valid in d1d2 mode");
      ObjectReader p = g.object("positions");
      f.geometry.positions = {p.vec3("l1"), p.vec3("u1"), p.vec3("l2"), p.vec3("u2")};
      p.finish();
    } else if (mode == "d1d2") {
      f.geometry.mode = GeometryMode::d1d2;
      g.forbid("positions", "is only valid in positions mode");
      f.geometry.d1 = g.number("d1");
      f.geometry.d2 = g.number("d2");
    } else {
      g.fail("mode", "'geometry.mode' must be \"positions\" or \"d1d2\"");
    }
    g.finish();
    try {
      (void)f.scenario();
    } catch (const std::exception& e) {
      root.fail("geometry", std::string("invalid geometry: ") + e.what());
    }
  }

  if (root.has("boost")) {
    ObjectReader b = root.object("boost");
    BoostSpec s;
    s.beta = b.number("beta");
    if (!(std::abs(s.beta) < 1.0)) b.fail("beta", "'boost.beta' must satisfy |beta| < 1");
    if (b.has("axis")) {
      s.axis = b.vec3("axis");
      if (!(norm(s.axis) > 0.0)) b.fail("axis", "'boost.axis' must be nonzero");
      s.axis = detail::unit(s.axis);
      s.axis_given = true;
    } else {
      s.axis = detail::perpendicular_to(f.separation_axis());
    }
    if (b.has("model")) {
      try {
        s.model = parse_quantization_model(b.string("model"));
      } catch (const DomainError& e) {
        b.fail("model", e.what());
      }
    }
    b.finish();
    f.boost = s;
  }

  if (root.has("bell")) {
    ObjectReader b = root.object("bell");
    f.bell = BellSpec{b.number("gamma_final")};
    if (!(f.bell->gamma_final >= 1.0)) b.fail("gamma_final", "'bell.gamma_final' must be >= 1");
    b.finish();
  }

  if (root.has("modesum")) {
    ObjectReader m = root.object("modesum");
    ModesumSpec s;
    s.wavenumbers = m.numbers("wavenumbers");
    if (s.wavenumbers.empty()) m.fail("wavenumbers", "'modesum.wavenumbers' must not be empty");
    for (double k : s.wavenumbers)
      if (k == 0.0) m.fail("wavenumbers", "'modesum.wavenumbers' entries must be nonzero");
    s.volume = m.number("volume");
    if (!(s.volume > 0.0)) m.fail("volume", "'modesum.volume' must be positive");
    const long long cutoff = m.integer("fock_cutoff");
    if (cutoff < 0 || cutoff > 1000) m.fail("fock_cutoff", "'modesum.fock_cutoff' must be in [0, 1000]");
    s.fock_cutoff = static_cast<int>(cutoff);
    const long long samples = m.integer_or("samples", s.samples);
    if (samples < 1 || samples > 100000) m.fail("samples", "'modesum.samples' must be in [1, 100000]");
    s.samples = static_cast<int>(samples);
    if (m.has("t_end")) {
      s.t_end = m.number("t_end");
      if (*s.t_end < 0.0) m.fail("t_end", "'modesum.t_end' must be non-negative");
    }
    if (m.has("axis")) {
      s.axis = m.vec3("axis");
      if (!(norm(*s.axis) > 0.0)) m.fail("axis", "'modesum.axis' must be nonzero");
    }
    const long long budget = m.integer_or("budget", static_cast<long long>(s.budget));
    if (budget < 4) m.fail("budget", "'modesum.budget' must be at least 4");
    s.budget = static_cast<std::size_t>(budget);
    m.finish();
    f.modesum = s;
  }

  root.finish();
  return f;
}

inline ScenarioFile load_scenario_text(const std::string& text, const std::string& source = "<config>") {
  return load_scenario(parse_config_text(text, source));
}

}  // namespace gravlink::cli
