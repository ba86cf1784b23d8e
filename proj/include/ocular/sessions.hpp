#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "ocular/lesion.hpp"
#include "ocular/payload.hpp"
#include "ocular/timestamp.hpp"

namespace ocular::sessions {

using nlohmann::json;

inline constexpr int kMinimumAge = 18;

struct IntakeRecord {
  bool consent = false;
  std::string name;
  std::optional<std::string> email;
  std::optional<std::string> phone;
  int age = 0;
  int pain_level = 0;
  bool photophobia = false;
  bool vision_changes = false;
  std::string notes;

  bool operator==(const IntakeRecord&) const = default;
};

// Type and shape errors raise ValidationFailed with the field as detail.
IntakeRecord intake_from_json(const json& j);
json to_json(const IntakeRecord& r);
// ConsentRequired, then ValidationFailed(age | pain_level).
void validate_intake(const IntakeRecord& r);

struct ResultEntry {
  payload::Module module = payload::Module::Redness;
  Timestamp created_at{};
  json payload;

  bool operator==(const ResultEntry&) const = default;
};

struct SessionDocument {
  std::string id;
  Timestamp created_at{};
  IntakeRecord intake;
  std::vector<ResultEntry> results;

  bool operator==(const SessionDocument&) const = default;
};

struct SessionSummary {
  std::string id;
  Timestamp created_at{};
  std::vector<std::string> modules;
};

json to_json(const SessionDocument& d);
json to_json(const SessionSummary& s);
SessionDocument document_from_json(const json& j);  // StoreFailure on malformed documents
// Sorted keys, compact, newline-terminated.
std::string canonical(const SessionDocument& d);

bool is_uuid(std::string_view s) noexcept;
std::string uuid_v4(std::mt19937_64& rng);

class DocumentStore {
 public:
  virtual ~DocumentStore() = default;
  virtual void create(const std::string& id, const std::string& text) = 0;   // DuplicateId
  virtual void replace(const std::string& id, const std::string& text) = 0;  // NotFound
  virtual std::optional<std::string> load(const std::string& id) const = 0;
  virtual std::vector<std::string> ids() const = 0;
};

class MemoryDocumentStore final : public DocumentStore {
 public:
  void create(const std::string& id, const std::string& text) override;
  void replace(const std::string& id, const std::string& text) override;
  std::optional<std::string> load(const std::string& id) const override;
  std::vector<std::string> ids() const override;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::string> docs_;
};

// One <id>.json per session; writes go to a temporary file renamed into place.
class FileDocumentStore final : public DocumentStore {
 public:
  explicit FileDocumentStore(std::filesystem::path dir);
  void create(const std::string& id, const std::string& text) override;
  void replace(const std::string& id, const std::string& text) override;
  std::optional<std::string> load(const std::string& id) const override;
  std::vector<std::string> ids() const override;
  const std::filesystem::path& directory() const noexcept { return dir_; }

 private:
  std::filesystem::path path_for(const std::string& id) const;
  void write_atomic(const std::string& id, const std::string& text);

  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

using Clock = std::function<Timestamp()>;
using IdGenerator = std::function<std::string()>;

IdGenerator random_ids();

class SessionRepository {
 public:
  explicit SessionRepository(DocumentStore& store, Clock clock = now_utc, IdGenerator ids = random_ids());

  SessionDocument create(const IntakeRecord& intake);
  SessionDocument get(const std::string& id) const;  // NotFound
  std::vector<SessionSummary> list() const;          // newest first

  // Validates the payload against its module schema (ValidationFailed).
  SessionDocument append(const std::string& id, payload::Module module, const json& payload);

  std::vector<lesion::LesionMeasurement> lesion_history(const std::string& id) const;

  // Loads the session, computes a payload from it and appends the result,
  // all under the session's write lock. `at` is the entry timestamp, strictly
  // after every earlier entry.
  using Analyzer = std::function<json(const SessionDocument&, Timestamp at)>;
  SessionDocument record(const std::string& id, payload::Module module, const Analyzer& analyze);

  Timestamp now() const { return clock_(); }

 private:
  DocumentStore& store_;
  Clock clock_;
  IdGenerator ids_;
  std::mutex map_mu_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;

  std::mutex& lock_for(const std::string& id);
};

std::vector<lesion::LesionMeasurement> lesion_history(const SessionDocument& d);

}  // namespace ocular::sessions
