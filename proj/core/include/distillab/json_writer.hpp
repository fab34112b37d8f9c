#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace distillab {

// Minimal JSON emitter with byte-exact formatting guarantees:
//   - reals printed with up to 17 significant digits (round-trip exact),
//   - 64-bit integers printed as integer tokens,
//   - no locale dependence, no whitespace variation.
// Output files produced through this writer are reproducible byte for byte.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view name);

  JsonWriter& value(double v);
  JsonWriter& value(bool v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }

  // Splices pre-serialized JSON in value position.
  JsonWriter& raw(std::string_view json);

  template <typename T>
  JsonWriter& key_value(std::string_view name, const T& v) {
    key(name);
    return value(v);
  }

  const std::string& str() const { return out_; }
  std::string take() { return std::move(out_); }

  static std::string format_real(double v);

 private:
  void prepare_value();
  void write_escaped(std::string_view s);

  std::string out_;
  // One frame per open container: true once the container has an element.
  std::vector<bool> has_element_;
  bool pending_key_ = false;
};

}  // namespace distillab
