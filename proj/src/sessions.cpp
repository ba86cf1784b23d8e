#include "ocular/sessions.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>

#include "ocular/error.hpp"
#include "ocular/schema.hpp"

namespace ocular::sessions {

namespace {

[[noreturn]] void invalid_field(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::ValidationFailed, fmt::format("intake.{}: {}", field, why), field);
}

template <class Pred>
const json* field(const json& j, const char* name, Pred ok, const char* what, bool required) {
  const auto it = j.find(name);
  if (it == j.end() || (it->is_null() && !required)) {
    if (required) invalid_field(name, "is required");
    return nullptr;
  }
  if (!ok(*it)) invalid_field(name, fmt::format("must be {}", what));
  return &*it;
}

const auto is_bool = [](const json& v) { return v.is_boolean(); };
const auto is_str = [](const json& v) { return v.is_string(); };
const auto is_int = [](const json& v) { return v.is_number_integer(); };

}  // namespace

IntakeRecord intake_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ValidationFailed, "intake must be a JSON object", "intake");
  IntakeRecord r;
  const auto consent = j.find("consent");
  if (consent == j.end() || consent->is_null()) {
    throw Error(ErrorCode::ConsentRequired, "intake.consent must be true to proceed", "consent");
  }
  if (!consent->is_boolean()) invalid_field("consent", "must be a boolean");
  r.consent = consent->get<bool>();
  if (const json* v = field(j, "name", is_str, "a string", false)) r.name = v->get<std::string>();
  if (const json* v = field(j, "email", is_str, "a string", false)) r.email = v->get<std::string>();
  if (const json* v = field(j, "phone", is_str, "a string", false)) r.phone = v->get<std::string>();
  r.age = field(j, "age", is_int, "an integer", true)->get<int>();
  r.pain_level = field(j, "pain_level", is_int, "an integer", true)->get<int>();
  if (const json* v = field(j, "photophobia", is_bool, "a boolean", false)) r.photophobia = v->get<bool>();
  if (const json* v = field(j, "vision_changes", is_bool, "a boolean", false)) r.vision_changes = v->get<bool>();
  if (const json* v = field(j, "notes", is_str, "a string", false)) r.notes = v->get<std::string>();
  return r;
}

json to_json(const IntakeRecord& r) {
  json j{{"consent", r.consent},
         {"name", r.name},
         {"age", r.age},
         {"pain_level", r.pain_level},
         {"photophobia", r.photophobia},
         {"vision_changes", r.vision_changes},
         {"notes", r.notes}};
  j["email"] = r.email ? json(*r.email) : json(nullptr);
  j["phone"] = r.phone ? json(*r.phone) : json(nullptr);
  return j;
}

void validate_intake(const IntakeRecord& r) {
  if (!r.consent) throw Error(ErrorCode::ConsentRequired, "intake.consent must be true to proceed", "consent");
  if (r.age < kMinimumAge) invalid_field("age", fmt::format("must be at least {}", kMinimumAge));
  if (r.age > 150) invalid_field("age", "is implausible");
  if (r.pain_level < 0 || r.pain_level > 10) invalid_field("pain_level", "must be between 0 and 10");
}

json to_json(const SessionDocument& d) {
  json results = json::array();
  for (const ResultEntry& e : d.results) {
    results.push_back(
        json{{"module", payload::to_string(e.module)}, {"created_at", format_iso8601(e.created_at)}, {"payload", e.payload}});
  }
  return json{{"id", d.id}, {"created_at", format_iso8601(d.created_at)}, {"intake", to_json(d.intake)}, {"results", results}};
}

json to_json(const SessionSummary& s) {
  return json{{"id", s.id}, {"created_at", format_iso8601(s.created_at)}, {"modules", s.modules}};
}

SessionDocument document_from_json(const json& j) {
  try {
    SessionDocument d;
    d.id = j.at("id").get<std::string>();
    d.created_at = parse_iso8601(j.at("created_at").get<std::string>());
    d.intake = intake_from_json(j.at("intake"));
    for (const json& e : j.at("results")) {
      d.results.push_back(ResultEntry{payload::parse_module(e.at("module").get<std::string>()),
                                      parse_iso8601(e.at("created_at").get<std::string>()), e.at("payload")});
    }
    return d;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::StoreFailure, fmt::format("malformed session document: {}", e.what()));
  } catch (const Error& e) {
    throw Error(ErrorCode::StoreFailure, fmt::format("malformed session document: {}", e.what()));
  }
}

std::string canonical(const SessionDocument& d) { return to_json(d).dump() + "\n"; }

bool is_uuid(std::string_view s) noexcept {
  if (s.size() != 36) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (i == 8 || i == 13 || i == 18 || i == 23) {
      if (c != '-') return false;
    } else if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
      return false;
    }
  }
  return true;
}

std::string uuid_v4(std::mt19937_64& rng) {
  std::uint64_t hi = rng(), lo = rng();
  hi = (hi & 0xffffffffffff0fffULL) | 0x0000000000004000ULL;
  lo = (lo & 0x3fffffffffffffffULL) | 0x8000000000000000ULL;
  return fmt::format("{:08x}-{:04x}-{:04x}-{:04x}-{:012x}", hi >> 32, (hi >> 16) & 0xffff, hi & 0xffff, lo >> 48,
                     lo & 0xffffffffffffULL);
}

IdGenerator random_ids() {
  auto rng = std::make_shared<std::mt19937_64>(std::random_device{}() ^ (static_cast<std::uint64_t>(std::random_device{}()) << 32));
  auto mu = std::make_shared<std::mutex>();
  return [rng, mu] {
    std::lock_guard lock(*mu);
    return uuid_v4(*rng);
  };
}

void MemoryDocumentStore::create(const std::string& id, const std::string& text) {
  std::lock_guard lock(mu_);
  if (!docs_.emplace(id, text).second) throw Error(ErrorCode::DuplicateId, "session id already exists", id);
}

void MemoryDocumentStore::replace(const std::string& id, const std::string& text) {
  std::lock_guard lock(mu_);
  const auto it = docs_.find(id);
  if (it == docs_.end()) throw Error(ErrorCode::NotFound, "no such session", id);
  it->second = text;
}

std::optional<std::string> MemoryDocumentStore::load(const std::string& id) const {
  std::lock_guard lock(mu_);
  const auto it = docs_.find(id);
  if (it == docs_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> MemoryDocumentStore::ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [k, v] : docs_) out.push_back(k);
  return out;
}

FileDocumentStore::FileDocumentStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_)) {
    throw Error(ErrorCode::StoreFailure, fmt::format("cannot use data directory '{}'", dir_.string()));
  }
}

std::filesystem::path FileDocumentStore::path_for(const std::string& id) const {
  if (!is_uuid(id)) throw Error(ErrorCode::NotFound, "no such session", id);
  return dir_ / (id + ".json");
}

void FileDocumentStore::write_atomic(const std::string& id, const std::string& text) {
  const std::filesystem::path target = path_for(id);
  const std::filesystem::path tmp = dir_ / ("." + id + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::StoreFailure, fmt::format("cannot write '{}'", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw Error(ErrorCode::StoreFailure, fmt::format("cannot replace '{}': {}", target.string(), ec.message()));
}

void FileDocumentStore::create(const std::string& id, const std::string& text) {
  std::lock_guard lock(mu_);
  if (std::filesystem::exists(path_for(id))) throw Error(ErrorCode::DuplicateId, "session id already exists", id);
  write_atomic(id, text);
}

void FileDocumentStore::replace(const std::string& id, const std::string& text) {
  std::lock_guard lock(mu_);
  if (!std::filesystem::exists(path_for(id))) throw Error(ErrorCode::NotFound, "no such session", id);
  write_atomic(id, text);
}

std::optional<std::string> FileDocumentStore::load(const std::string& id) const {
  if (!is_uuid(id)) return std::nullopt;
  std::ifstream in(dir_ / (id + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::vector<std::string> FileDocumentStore::ids() const {
  std::vector<std::string> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    const std::string stem = entry.path().stem().string();
    if (is_uuid(stem)) out.push_back(stem);
  }
  std::sort(out.begin(), out.end());
  return out;
}

SessionRepository::SessionRepository(DocumentStore& store, Clock clock, IdGenerator ids)
    : store_(store), clock_(std::move(clock)), ids_(std::move(ids)) {}

SessionDocument SessionRepository::create(const IntakeRecord& intake) {
  validate_intake(intake);
  SessionDocument d;
  d.id = ids_();
  d.created_at = clock_();
  d.intake = intake;
  store_.create(d.id, canonical(d));
  return d;
}

SessionDocument SessionRepository::get(const std::string& id) const {
  const std::optional<std::string> text = store_.load(id);
  if (!text) throw Error(ErrorCode::NotFound, "no such session", id);
  const json j = json::parse(*text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::StoreFailure, "stored session is not valid JSON", id);
  return document_from_json(j);
}

std::vector<SessionSummary> SessionRepository::list() const {
  std::vector<SessionSummary> out;
  for (const std::string& id : store_.ids()) {
    const SessionDocument d = get(id);
    SessionSummary s{d.id, d.created_at, {}};
    for (const ResultEntry& e : d.results) s.modules.push_back(payload::to_string(e.module));
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const SessionSummary& a, const SessionSummary& b) {
    return a.created_at != b.created_at ? a.created_at > b.created_at : a.id < b.id;
  });
  return out;
}

std::mutex& SessionRepository::lock_for(const std::string& id) {
  std::lock_guard guard(map_mu_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

SessionDocument SessionRepository::record(const std::string& id, payload::Module module, const Analyzer& analyze) {
  std::lock_guard guard(lock_for(id));
  SessionDocument d = get(id);
  Timestamp at = std::max(clock_(), d.created_at);
  if (!d.results.empty() && at <= d.results.back().created_at) at = d.results.back().created_at + std::chrono::milliseconds(1);
  json p = analyze(d, at);
  const std::vector<std::string> problems = schema::validate(payload::schema_for(module), p);
  if (!problems.empty()) throw Error(ErrorCode::ValidationFailed, "payload fails its schema: " + problems.front(), "payload");
  d.results.push_back(ResultEntry{module, at, std::move(p)});
  store_.replace(d.id, canonical(d));
  return d;
}

SessionDocument SessionRepository::append(const std::string& id, payload::Module module, const json& p) {
  return record(id, module, [&](const SessionDocument&, Timestamp) { return p; });
}

std::vector<lesion::LesionMeasurement> lesion_history(const SessionDocument& d) {
  std::vector<lesion::LesionMeasurement> out;
  for (const ResultEntry& e : d.results) {
    if (e.module != payload::Module::Lesion) continue;
    lesion::LesionMeasurement m;
    m.d_mm = e.payload.at("encroachment_mm").get<double>();
    m.captured_at = e.created_at;
    out.push_back(m);
  }
  return out;
}

std::vector<lesion::LesionMeasurement> SessionRepository::lesion_history(const std::string& id) const {
  return sessions::lesion_history(get(id));
}

}  // namespace ocular::sessions
