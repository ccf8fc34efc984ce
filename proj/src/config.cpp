#include "maskfill/config.hpp"

#include <cctype>
#include <charconv>

#include "maskfill/io.hpp"

namespace maskfill {

using io::json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && text::is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && text::is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string where(std::size_t line_no) { return line_no ? " (line " + std::to_string(line_no) + ")" : ""; }

std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

json parse_scalar(std::string_view v, std::size_t line_no, bool bare_strings) {
  v = trim(v);
  if (v.empty()) config_error("missing value" + where(line_no));
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') config_error("unterminated string" + where(line_no));
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\' && i + 2 < v.size()) {
        const char e = v[++i];
        out.push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
      } else {
        out.push_back(v[i]);
      }
    }
    return out;
  }
  if (v == "true") return true;
  if (v == "false") return false;
  long long iv = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), iv);
  if (ec == std::errc() && p == v.data() + v.size()) return iv;
  double dv = 0;
  auto [p2, ec2] = std::from_chars(v.data(), v.data() + v.size(), dv);
  if (ec2 == std::errc() && p2 == v.data() + v.size()) return dv;
  if (bare_strings) return std::string(v);
  config_error("cannot parse value '" + std::string(v) + "'" + where(line_no));
}

json parse_value(std::string_view v, std::size_t line_no, bool bare_strings) {
  v = trim(v);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') config_error("unterminated array" + where(line_no));
    json arr = json::array();
    std::string_view body = trim(v.substr(1, v.size() - 2));
    while (!body.empty()) {
      std::size_t comma = std::string_view::npos;
      bool in_string = false;
      for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '"') in_string = !in_string;
        if (body[i] == ',' && !in_string) {
          comma = i;
          break;
        }
      }
      arr.push_back(parse_scalar(body.substr(0, comma), line_no, bare_strings));
      if (comma == std::string_view::npos) break;
      body = trim(body.substr(comma + 1));
    }
    return arr;
  }
  return parse_scalar(v, line_no, bare_strings);
}

bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

// Typed accessor that reports config errors instead of json exceptions.
template <typename T>
T get(const json& section, const char* key, T fallback, std::string_view section_name) {
  auto it = section.find(key);
  if (it == section.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    config_error("bad type for " + std::string(section_name) + "." + key);
  }
}

double ratio(const json& section, const char* key, double fallback, std::string_view name) {
  const double v = get<double>(section, key, fallback, name);
  if (!(v >= 0.0 && v <= 1.0)) config_error(std::string(name) + "." + key + " must lie in [0, 1]");
  return v;
}

void check_keys(const json& section, std::string_view name, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, _] : section.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == k;
    if (!ok) config_error("unknown key '" + std::string(name) + "." + k + "'");
  }
}

const json& section(const json& j, const char* name) {
  static const json kEmpty = json::object();
  auto it = j.find(name);
  if (it == j.end()) return kEmpty;
  if (!it->is_object()) config_error(std::string("'") + name + "' must be a section");
  return *it;
}

}  // namespace

json parse_config_text(std::string_view text) {
  json root = json::object();
  json* current = &root;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(strip_comment(text.substr(pos, end - pos)));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') config_error("malformed section header" + where(line_no));
      std::string name(trim(line.substr(1, line.size() - 2)));
      if (!valid_key(name)) config_error("bad section name" + where(line_no));
      if (root.contains(name) && !root[name].is_object()) config_error("section clashes with key" + where(line_no));
      current = &root[name];
      if (current->is_null()) *current = json::object();
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) config_error("expected key = value" + where(line_no));
    std::string key(trim(line.substr(0, eq)));
    if (!valid_key(key)) config_error("bad key '" + key + "'" + where(line_no));
    (*current)[key] = parse_value(line.substr(eq + 1), line_no, false);
  }
  return root;
}

json load_config_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) config_error("config file not found: " + path.string());
  return parse_config_text(io::read_file(path));
}

void apply_override(json& config, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos) config_error("override must look like section.key=value");
  std::string_view path = trim(assignment.substr(0, eq));
  json value = parse_value(assignment.substr(eq + 1), 0, true);
  const std::size_t dot = path.find('.');
  if (dot == std::string_view::npos) {
    if (!valid_key(path)) config_error("bad override key");
    config[std::string(path)] = value;
    return;
  }
  std::string sec(path.substr(0, dot)), key(path.substr(dot + 1));
  if (!valid_key(sec) || !valid_key(key)) config_error("bad override key");
  if (!config.contains(sec)) config[sec] = json::object();
  config[sec][key] = value;
}

PipelineConfig PipelineConfig::from_json(const json& j) {
  PipelineConfig c;
  check_keys(j, "<top>", {"seed", "jobs", "corpus", "masking", "infiller", "dataset", "classifier", "evaluation", "sweep"});
  const long long seed = get<long long>(j, "seed", 0, "<top>");
  if (seed < 0) config_error("seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  const long long jobs = get<long long>(j, "jobs", 1, "<top>");
  if (jobs < 1) config_error("jobs must be at least 1");
  c.jobs = static_cast<std::size_t>(jobs);

  const json& corpus = section(j, "corpus");
  check_keys(corpus, "corpus", {"path", "format"});
  c.corpus_path = get<std::string>(corpus, "path", c.corpus_path, "corpus");
  c.corpus_format = get<std::string>(corpus, "format", c.corpus_format, "corpus");
  parse_corpus_format(c.corpus_format);

  const json& masking = section(j, "masking");
  check_keys(masking, "masking", {"gamma_a", "gamma_s", "unit", "annotator"});
  c.masking.gamma_a = ratio(masking, "gamma_a", c.masking.gamma_a, "masking");
  c.masking.gamma_s = ratio(masking, "gamma_s", c.masking.gamma_s, "masking");
  c.masking.unit = parse_unit(get<std::string>(masking, "unit", "np_ent", "masking"));
  c.masking.annotator = get<std::string>(masking, "annotator", c.masking.annotator, "masking");

  const json& inf = section(j, "infiller");
  check_keys(inf, "infiller", {"method", "backend", "epochs", "batch", "max_in", "max_tgt", "beam_size", "max_length",
                               "n_samples"});
  c.method = parse_method(get<std::string>(inf, "method", "mfma", "infiller"));
  c.infill_backend = get<std::string>(inf, "backend", c.infill_backend, "infiller");
  c.infill_train.epochs = get<int>(inf, "epochs", c.infill_train.epochs, "infiller");
  c.infill_train.batch_size = get<int>(inf, "batch", c.infill_train.batch_size, "infiller");
  c.infill_train.max_input_len = get<int>(inf, "max_in", c.infill_train.max_input_len, "infiller");
  c.infill_train.max_target_len = get<int>(inf, "max_tgt", c.infill_train.max_target_len, "infiller");
  c.decode.beam_size = get<int>(inf, "beam_size", c.decode.beam_size, "infiller");
  c.decode.max_length = get<int>(inf, "max_length", c.decode.max_length, "infiller");
  const long long n_samples = get<long long>(inf, "n_samples", 1, "infiller");
  if (n_samples < 1) config_error("infiller.n_samples must be at least 1");
  c.n_samples = static_cast<std::size_t>(n_samples);

  const json& ds = section(j, "dataset");
  check_keys(ds, "dataset", {"min_edit_distinctness", "drop_empty"});
  c.filter.min_edit_distinctness = ratio(ds, "min_edit_distinctness", 0.0, "dataset");
  c.filter.drop_empty = get<bool>(ds, "drop_empty", true, "dataset");

  const json& cls = section(j, "classifier");
  check_keys(cls, "classifier", {"backend", "epochs", "lr", "batch", "max_input_len", "threshold"});
  c.classifier_backend = get<std::string>(cls, "backend", c.classifier_backend, "classifier");
  c.classifier.epochs = get<int>(cls, "epochs", c.classifier.epochs, "classifier");
  c.classifier.learning_rate = get<double>(cls, "lr", c.classifier.learning_rate, "classifier");
  c.classifier.batch_size = get<int>(cls, "batch", c.classifier.batch_size, "classifier");
  c.classifier.max_input_len = get<std::size_t>(cls, "max_input_len", c.classifier.max_input_len, "classifier");
  c.threshold = ratio(cls, "threshold", c.threshold, "classifier");

  const json& ev = section(j, "evaluation");
  check_keys(ev, "evaluation", {"validation", "validation_schema", "scorer"});
  c.validation_path = get<std::string>(ev, "validation", c.validation_path, "evaluation");
  c.validation_schema = get<std::string>(ev, "validation_schema", c.validation_schema, "evaluation");
  parse_benchmark(c.validation_schema);
  c.scorer = get<std::string>(ev, "scorer", c.scorer, "evaluation");

  const json& sw = section(j, "sweep");
  check_keys(sw, "sweep", {"gamma_a", "gamma_s"});
  c.sweep_gamma_a = get<std::vector<double>>(sw, "gamma_a", c.sweep_gamma_a, "sweep");
  c.sweep_gamma_s = get<std::vector<double>>(sw, "gamma_s", c.sweep_gamma_s, "sweep");
  for (const auto* axis : {&c.sweep_gamma_a, &c.sweep_gamma_s}) {
    if (axis->empty()) config_error("sweep axes must not be empty");
    for (double g : *axis)
      if (!(g >= 0.0 && g <= 1.0)) config_error("sweep ratios must lie in [0, 1]");
  }
  return c;
}

json PipelineConfig::to_json() const {
  return {{"seed", seed},
          {"jobs", jobs},
          {"corpus", {{"path", corpus_path}, {"format", corpus_format}}},
          {"masking",
           {{"gamma_a", masking.gamma_a},
            {"gamma_s", masking.gamma_s},
            {"unit", to_string(masking.unit)},
            {"annotator", masking.annotator}}},
          {"infiller",
           {{"method", to_string(method)},
            {"backend", infill_backend},
            {"epochs", infill_train.epochs},
            {"batch", infill_train.batch_size},
            {"max_in", infill_train.max_input_len},
            {"max_tgt", infill_train.max_target_len},
            {"beam_size", decode.beam_size},
            {"max_length", decode.max_length},
            {"n_samples", n_samples}}},
          {"dataset", {{"min_edit_distinctness", filter.min_edit_distinctness}, {"drop_empty", filter.drop_empty}}},
          {"classifier",
           {{"backend", classifier_backend},
            {"epochs", classifier.epochs},
            {"lr", classifier.learning_rate},
            {"batch", classifier.batch_size},
            {"max_input_len", classifier.max_input_len},
            {"threshold", threshold}}},
          {"evaluation", {{"validation", validation_path}, {"validation_schema", validation_schema}, {"scorer", scorer}}},
          {"sweep", {{"gamma_a", sweep_gamma_a}, {"gamma_s", sweep_gamma_s}}}};
}

std::string PipelineConfig::fingerprint() const {
  return hash::hex(hash::Hasher(0).add(to_json().dump()).digest());
}

}  // namespace maskfill
