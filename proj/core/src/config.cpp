#include "pam/config.hpp"

#include <fstream>
#include <sstream>

#include "json_codec.hpp"

namespace pam {

using nlohmann::json;

struct Config::Impl {
  json doc;

  const json* find(const std::string& dotted) const {
    const json* cur = &doc;
    std::size_t start = 0;
    while (start <= dotted.size()) {
      const std::size_t dot = dotted.find('.', start);
      const std::string key = dotted.substr(start, dot == std::string::npos
                                                       ? std::string::npos
                                                       : dot - start);
      if (!cur->is_object() || !cur->contains(key)) return nullptr;
      cur = &(*cur)[key];
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    return cur;
  }

  json& slot(const std::string& dotted) {
    json* cur = &doc;
    std::size_t start = 0;
    while (true) {
      const std::size_t dot = dotted.find('.', start);
      const std::string key = dotted.substr(start, dot == std::string::npos
                                                       ? std::string::npos
                                                       : dot - start);
      if (dot == std::string::npos) return (*cur)[key];
      if (!cur->contains(key) || !(*cur)[key].is_object()) (*cur)[key] = json::object();
      cur = &(*cur)[key];
      start = dot + 1;
    }
  }
};

namespace {

void apply_overrides(Config::Impl& impl, const std::vector<std::string>& overrides) {
  for (const std::string& ov : overrides) {
    const std::size_t eq = ov.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("override must look like path.to.key=value: " + ov);
    const std::string path = ov.substr(0, eq);
    const std::string raw = ov.substr(eq + 1);
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;  // bare strings stay strings
    }
    impl.slot(path) = value;
  }
}

}  // namespace

Config::Config() : impl_(std::make_unique<Impl>()) { impl_->doc = json::object(); }
Config::~Config() = default;
Config::Config(const Config& other) : impl_(std::make_unique<Impl>(*other.impl_)) {}
Config& Config::operator=(const Config& other) {
  impl_ = std::make_unique<Impl>(*other.impl_);
  return *this;
}

Config Config::from_string(const std::string& text, const std::vector<std::string>& overrides) {
  Config c;
  try {
    c.impl_->doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!c.impl_->doc.is_object()) throw ConfigError("config root must be a JSON object");
  apply_overrides(*c.impl_, overrides);
  return c;
}

Config Config::from_file(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str(), overrides);
}

std::string Config::canonical_text() const { return impl_->doc.dump(2) + "\n"; }

std::uint64_t Config::master_seed() const {
  const json* j = impl_->find("master_seed");
  if (!j || !j->is_number())
    throw ConfigError("config: master_seed is required (no implicit random seed)");
  return j->get<std::uint64_t>();
}

int Config::workers() const { return static_cast<int>(integer_or("workers", 0)); }

std::string Config::output_dir() const { return string_or("output_dir", "out"); }

bool Config::has(const std::string& dotted) const { return impl_->find(dotted) != nullptr; }

double Config::number(const std::string& dotted) const {
  const json* j = impl_->find(dotted);
  if (!j || !j->is_number()) throw ConfigError("config: missing number at " + dotted);
  return j->get<double>();
}

double Config::number_or(const std::string& dotted, double fallback) const {
  const json* j = impl_->find(dotted);
  return j && j->is_number() ? j->get<double>() : fallback;
}

std::int64_t Config::integer_or(const std::string& dotted, std::int64_t fallback) const {
  const json* j = impl_->find(dotted);
  return j && j->is_number() ? j->get<std::int64_t>() : fallback;
}

std::string Config::string_or(const std::string& dotted, const std::string& fallback) const {
  const json* j = impl_->find(dotted);
  return j && j->is_string() ? j->get<std::string>() : fallback;
}

bool Config::flag_or(const std::string& dotted, bool fallback) const {
  const json* j = impl_->find(dotted);
  return j && j->is_boolean() ? j->get<bool>() : fallback;
}

std::vector<double> Config::numbers(const std::string& dotted) const {
  const json* j = impl_->find(dotted);
  if (!j || !j->is_array()) throw ConfigError("config: missing array at " + dotted);
  return j->get<std::vector<double>>();
}

std::vector<double> Config::numbers_or(const std::string& dotted,
                                       std::vector<double> fallback) const {
  const json* j = impl_->find(dotted);
  return j && j->is_array() ? j->get<std::vector<double>>() : std::move(fallback);
}

NoiseSpec Config::noise() const {
  const json* j = impl_->find("noise");
  if (!j) throw ConfigError("config: missing noise block");
  return noise_from_json(*j);
}

GridSpec Config::grid() const {
  const json* j = impl_->find("grid");
  if (!j) throw ConfigError("config: missing grid block");
  return grid_from_json(*j);
}

InitialCondition Config::u0() const {
  const json* j = impl_->find("u0");
  if (!j) return InitialCondition::constant_one();
  return u0_from_json(*j);
}

McParams Config::mc() const {
  McParams mc;
  mc.samples = static_cast<std::size_t>(integer_or("mc.samples", 100000));
  mc.seed = master_seed();
  return mc;
}

std::vector<std::string> Config::validate(const std::string& command) const {
  std::vector<std::string> errors;
  auto attempt = [&errors](const char* what, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      errors.push_back(std::string(what) + ": " + e.what());
    }
  };
  attempt("master_seed", [&] { master_seed(); });
  const bool needs_noise = command != "report";
  if (needs_noise) attempt("noise", [&] { noise(); });
  const bool holder_from_file = command == "holder" && has("holder.ensemble_dir");
  if (command == "simulate" || command == "selftest" ||
      (command == "holder" && !holder_from_file))
    attempt("grid", [&] { grid(); });
  attempt("u0", [&] { u0(); });
  if (command == "chaos") {
    attempt("chaos.levels", [&] {
      for (double n : numbers_or("chaos.levels", {1, 2, 3}))
        if (n < 1 || n > 6) throw ConfigError("chaos levels must lie in [1,6]");
    });
    attempt("mc.samples", [&] {
      if (integer_or("mc.samples", 100000) < 1000) throw ConfigError("need >= 1e3 samples");
    });
  }
  if (command == "simulate") {
    attempt("simulate.replicas", [&] {
      if (integer_or("simulate.replicas", 0) < 2) throw ConfigError("need >= 2 replicas");
    });
    attempt("simulate.snapshot_times", [&] { numbers("simulate.snapshot_times"); });
  }
  return errors;
}

}  // namespace pam
