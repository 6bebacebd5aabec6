#include "lodstory/service/story_store.hpp"

#include <algorithm>
#include <json.hpp>
#include <set>
#include <system_error>

#include "lodstory/detail/files.hpp"
#include "lodstory/error.hpp"
#include "lodstory/story_json.hpp"

namespace lodstory::service {

namespace {

constexpr std::string_view kMetaSuffix = ".meta.json";

std::string meta_json(const StoryMeta& meta) {
  nlohmann::ordered_json doc;
  doc["owner"] = meta.owner ? nlohmann::ordered_json(*meta.owner) : nullptr;
  doc["owner_tier"] = std::string(to_string(meta.owner_tier));
  doc["session"] = meta.session ? nlohmann::ordered_json(*meta.session) : nullptr;
  doc["revision"] = meta.revision;
  return doc.dump();
}

StoryMeta parse_meta(const std::string& text, const std::string& where) {
  try {
    auto doc = nlohmann::json::parse(text);
    StoryMeta meta;
    if (doc.at("owner").is_string()) meta.owner = doc["owner"].get<std::string>();
    auto tier = parse_tier(doc.at("owner_tier").get<std::string>());
    if (!tier) throw Error(ErrorCode::IoError, "bad owner_tier in " + where);
    meta.owner_tier = *tier;
    if (doc.at("session").is_string()) meta.session = doc["session"].get<std::string>();
    meta.revision = doc.at("revision").get<std::uint64_t>();
    return meta;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::IoError, "corrupt metadata " + where + ": " + e.what());
  }
}

}  // namespace

StoryStore::StoryStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir_.string() + ": " + ec.message());
}

std::filesystem::path StoryStore::story_path(std::string_view id) const {
  return dir_ / (std::string(id) + ".json");
}

std::filesystem::path StoryStore::meta_path(std::string_view id) const {
  return dir_ / (std::string(id) + std::string(kMetaSuffix));
}

std::shared_ptr<std::mutex> StoryStore::lock_for(std::string_view id) const {
  std::lock_guard guard(locks_mutex_);
  auto it = locks_.find(id);
  if (it == locks_.end()) it = locks_.emplace(std::string(id), std::make_shared<std::mutex>()).first;
  return it->second;
}

std::optional<StoredStory> StoryStore::read(std::string_view id) const {
  if (!is_valid_story_id(id)) return std::nullopt;
  auto sp = story_path(id);
  auto mp = meta_path(id);
  std::error_code ec;
  if (!std::filesystem::exists(sp, ec) || !std::filesystem::exists(mp, ec)) return std::nullopt;
  StoredStory out;
  out.story = deserialize_story(detail::read_file(sp));
  out.meta = parse_meta(detail::read_file(mp), mp.string());
  out.story.revision = out.meta.revision;
  return out;
}

void StoryStore::write(const StoredStory& stored) const {
  detail::write_file_atomic(story_path(stored.story.id), serialize_story(stored.story));
  detail::write_file_atomic(meta_path(stored.story.id), meta_json(stored.meta));
}

StoredStory StoryStore::create(Story story, StoryMeta meta) {
  std::lock_guard guard(create_mutex_);
  std::set<std::string, std::less<>> taken;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir_, ec)) {
    auto name = entry.path().filename().string();
    if (name.size() > kMetaSuffix.size() &&
        name.compare(name.size() - kMetaSuffix.size(), kMetaSuffix.size(), kMetaSuffix) == 0)
      taken.insert(name.substr(0, name.size() - kMetaSuffix.size()));
    else if (entry.path().extension() == ".json")
      taken.insert(entry.path().stem().string());
  }
  if (ec) throw Error(ErrorCode::IoError, "cannot list " + dir_.string() + ": " + ec.message());
  if (!is_valid_story_id(story.id)) story.id = slugify(story.title);
  story.id = unique_slug(story.id, taken);
  meta.revision = 1;
  story.revision = 1;
  StoredStory stored{std::move(story), std::move(meta)};
  auto lock = lock_for(stored.story.id);
  std::lock_guard story_guard(*lock);
  write(stored);
  return stored;
}

std::optional<StoredStory> StoryStore::find(std::string_view id) const {
  if (!is_valid_story_id(id)) return std::nullopt;
  auto lock = lock_for(id);
  std::lock_guard guard(*lock);
  return read(id);
}

std::vector<StoredStory> StoryStore::list() const {
  std::vector<std::string> ids;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir_, ec)) {
    auto name = entry.path().filename().string();
    if (name.size() > kMetaSuffix.size() &&
        name.compare(name.size() - kMetaSuffix.size(), kMetaSuffix.size(), kMetaSuffix) == 0)
      ids.push_back(name.substr(0, name.size() - kMetaSuffix.size()));
  }
  if (ec) throw Error(ErrorCode::IoError, "cannot list " + dir_.string() + ": " + ec.message());
  std::sort(ids.begin(), ids.end());
  std::vector<StoredStory> out;
  for (const auto& id : ids) {
    if (auto s = find(id)) out.push_back(std::move(*s));
  }
  return out;
}

StoredStory StoryStore::modify(std::string_view id, std::uint64_t expected_revision,
                               const std::function<Story(const StoredStory&)>& change) {
  if (!is_valid_story_id(id)) throw Error(ErrorCode::NotFound, "no story '" + std::string(id) + "'");
  auto lock = lock_for(id);
  std::lock_guard guard(*lock);
  auto current = read(id);
  if (!current) throw Error(ErrorCode::NotFound, "no story '" + std::string(id) + "'");
  if (current->meta.revision != expected_revision) {
    throw Error(ErrorCode::RevisionConflict,
                "story '" + std::string(id) + "' is at revision " +
                    std::to_string(current->meta.revision) + ", update was based on " +
                    std::to_string(expected_revision));
  }
  StoredStory next{change(*current), current->meta};
  next.story.id = current->story.id;
  next.meta.revision = current->meta.revision + 1;
  next.story.revision = next.meta.revision;
  write(next);
  return next;
}

void StoryStore::remove(std::string_view id) {
  if (!is_valid_story_id(id)) throw Error(ErrorCode::NotFound, "no story '" + std::string(id) + "'");
  auto lock = lock_for(id);
  std::lock_guard guard(*lock);
  std::error_code ec;
  bool had_meta = std::filesystem::remove(meta_path(id), ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot remove " + meta_path(id).string());
  bool had_story = std::filesystem::remove(story_path(id), ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot remove " + story_path(id).string());
  if (!had_meta && !had_story) throw Error(ErrorCode::NotFound, "no story '" + std::string(id) + "'");
}

}  // namespace lodstory::service
