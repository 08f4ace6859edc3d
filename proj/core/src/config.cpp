#include "sdasel/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace sdasel {

namespace {

std::string located(int line, int column, const std::string& message) {
  std::ostringstream out;
  out << "config: line " << line << ", column " << column << ": " << message;
  return out.str();
}

class LineParser {
 public:
  LineParser(const std::string& text, int line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }
  bool at_end_or_comment() {
    skip_space();
    return pos_ >= text_.size() || text_[pos_] == '#';
  }
  int column() const { return static_cast<int>(pos_) + 1; }
  [[noreturn]] void fail(const std::string& message) const { throw ConfigError(line_, column(), message); }

  std::string key() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a key");
    return text_.substr(start, pos_ - start);
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  ConfigValue value() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '[') {
      ++pos_;
      std::vector<ConfigScalar> items;
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ']') {
        ++pos_;
        return items;
      }
      while (true) {
        items.push_back(scalar());
        skip_space();
        if (pos_ >= text_.size()) fail("unterminated array");
        if (text_[pos_] == ',') {
          ++pos_;
          skip_space();
          if (pos_ < text_.size() && text_[pos_] == ']') {
            ++pos_;
            break;
          }
          continue;
        }
        if (text_[pos_] == ']') {
          ++pos_;
          break;
        }
        fail("expected ',' or ']' in array");
      }
      return items;
    }
    const ConfigScalar s = scalar();
    return std::visit([](const auto& v) -> ConfigValue { return v; }, s);
  }

 private:
  ConfigScalar scalar() {
    skip_space();
    if (pos_ >= text_.size()) fail("expected a value");
    const char c = text_[pos_];
    if (c == '"') {
      ++pos_;
      std::string out;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
        out += text_[pos_++];
      }
      if (pos_ >= text_.size()) fail("unterminated string");
      ++pos_;
      return out;
    }
    if (text_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return true;
    }
    if (text_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return false;
    }
    std::size_t end = pos_;
    while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '.' ||
                                  text_[end] == '-' || text_[end] == '+' || text_[end] == '_')) {
      ++end;
    }
    std::string token = text_.substr(pos_, end - pos_);
    token.erase(std::remove(token.begin(), token.end(), '_'), token.end());
    if (!token.empty() && token[0] == '+') token.erase(0, 1);
    double number = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), number);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(number)) {
      fail("expected a number, string, boolean or array");
    }
    pos_ = end;
    return number;
  }

  const std::string& text_;
  int line_;
  std::size_t pos_ = 0;
};

double as_number(const std::string& key, const ConfigEntry& e) {
  if (const auto* d = std::get_if<double>(&e.value)) return *d;
  throw ConfigError(e.line, e.column, "'" + key + "' must be a number");
}

std::string as_string(const std::string& key, const ConfigEntry& e) {
  if (const auto* s = std::get_if<std::string>(&e.value)) return *s;
  throw ConfigError(e.line, e.column, "'" + key + "' must be a string");
}

std::int64_t as_integer(const std::string& key, const ConfigEntry& e, double lo, double hi) {
  const double d = as_number(key, e);
  if (d != std::floor(d) || d < lo || d > hi) {
    throw ConfigError(e.line, e.column, "'" + key + "' must be an integer in range");
  }
  return static_cast<std::int64_t>(d);
}

std::vector<ConfigScalar> as_array(const std::string& key, const ConfigEntry& e) {
  if (const auto* a = std::get_if<std::vector<ConfigScalar>>(&e.value)) return *a;
  // A bare scalar is accepted as a one-element list.
  return {std::visit(
      [&](const auto& v) -> ConfigScalar {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::vector<ConfigScalar>>) {
          throw ConfigError(e.line, e.column, "'" + key + "' is malformed");
        } else {
          return v;
        }
      },
      e.value)};
}

std::vector<double> as_numbers(const std::string& key, const ConfigEntry& e) {
  std::vector<double> out;
  for (const auto& item : as_array(key, e)) {
    const auto* d = std::get_if<double>(&item);
    if (!d) throw ConfigError(e.line, e.column, "'" + key + "' must hold numbers");
    out.push_back(*d);
  }
  return out;
}

std::uint64_t parse_seed(const std::string& key, const ConfigEntry& e) {
  // Seeds may exceed 2^53, so strings are parsed exactly.
  if (const auto* s = std::get_if<std::string>(&e.value)) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), out);
    if (ec != std::errc() || ptr != s->data() + s->size()) {
      throw ConfigError(e.line, e.column, "'" + key + "' must be an unsigned 64-bit integer");
    }
    return out;
  }
  return static_cast<std::uint64_t>(as_integer(key, e, 0.0, 9007199254740992.0));
}

template <typename F>
auto at(const ConfigEntry& e, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& err) {
    throw ConfigError(e.line, e.column, err.what());
  }
}

}  // namespace

ConfigError::ConfigError(int line, int column, const std::string& message)
    : InvalidArgument(located(line, column, message)), line_(line), column_(column) {}

ConfigDocument parse_config_document(const std::string& text) {
  ConfigDocument doc;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    LineParser parser(raw, line);
    if (parser.at_end_or_comment()) continue;
    if (raw[raw.find_first_not_of(" \t")] == '[') parser.fail("tables are not supported; use flat keys");
    const int key_column = parser.column();
    const std::string key = parser.key();
    if (doc.count(key)) throw ConfigError(line, key_column, "duplicate key '" + key + "'");
    parser.expect('=');
    parser.skip_space();
    ConfigEntry entry;
    entry.column = parser.column();
    entry.line = line;
    entry.value = parser.value();
    if (!parser.at_end_or_comment()) parser.fail("unexpected trailing characters");
    doc.emplace(key, std::move(entry));
  }
  return doc;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  const ConfigDocument doc = parse_config_document(text);
  ExperimentConfig config;
  bool have_regime = false;
  for (const auto& [key, e] : doc) {
    if (key == "regime" || key == "regimes") {
      if (have_regime) throw ConfigError(e.line, e.column, "give either 'regime' or 'regimes', not both");
      have_regime = true;
      config.regimes.clear();
      for (const auto& item : as_array(key, e)) {
        const auto* s = std::get_if<std::string>(&item);
        if (!s) throw ConfigError(e.line, e.column, "'" + key + "' must hold strings");
        config.regimes.push_back(at(e, [&] { return regime_from_string(*s); }));
      }
    } else if (key == "p_list" || key == "p") {
      for (double d : as_numbers(key, e)) {
        if (d != std::floor(d) || d < 3 || d > 1e6) throw ConfigError(e.line, e.column, "p values must be integers >= 3");
        config.p_list.push_back(static_cast<Index>(d));
      }
    } else if (key == "theta_grid") {
      config.theta_grid = as_numbers(key, e);
    } else if (key == "replications") {
      config.replications = static_cast<int>(as_integer(key, e, 1, 1e8));
    } else if (key == "covariance") {
      config.covariance = at(e, [&] { return covariance_kind_from_string(as_string(key, e)); });
    } else if (key == "rho") {
      config.rho = as_number(key, e);
    } else if (key == "rho_list") {
      config.rho_list = as_numbers(key, e);
    } else if (key == "lambda_rule") {
      config.lambda_rule.kind = at(e, [&] { return lambda_rule_from_string(as_string(key, e)); });
    } else if (key == "lambda") {
      config.lambda_rule.value = as_number(key, e);
    } else if (key == "k_lambda0") {
      config.lambda_rule.k_lambda0 = as_number(key, e);
    } else if (key == "mean_magnitude") {
      config.mean_magnitude = as_number(key, e);
    } else if (key == "base_seed") {
      config.base_seed = parse_seed(key, e);
    } else if (key == "workers") {
      config.workers = static_cast<int>(as_integer(key, e, 0, 4096));
    } else if (key == "support_threshold") {
      config.support_threshold = as_number(key, e);
    } else if (key == "max_failure_fraction") {
      config.max_failure_fraction = as_number(key, e);
    } else {
      throw ConfigError(e.line, 1, "unknown key '" + key + "'");
    }
  }
  const auto lambda_entry = doc.find("lambda");
  if (config.lambda_rule.kind == LambdaRuleKind::fixed && lambda_entry == doc.end()) {
    throw ConfigError(doc.count("lambda_rule") ? doc.at("lambda_rule").line : 1, 1,
                      "lambda_rule = \"fixed\" needs a 'lambda' value");
  }
  config.validate();
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

}  // namespace sdasel
