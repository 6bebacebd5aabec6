#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lodstory/service/auth.hpp"
#include "lodstory/story.hpp"

namespace lodstory::service {

struct StoryMeta {
  std::optional<std::string> owner;    // subject of an authenticated creator
  Tier owner_tier = Tier::Anonymous;
  std::optional<std::string> session;  // anonymous creators only
  std::uint64_t revision = 1;
  friend bool operator==(const StoryMeta&, const StoryMeta&) = default;
};

struct StoredStory {
  Story story;  // story.revision mirrors meta.revision
  StoryMeta meta;
};

// File-backed store: `{dir}/{id}.json` holds the story document exactly as
// serialize_story writes it, `{dir}/{id}.meta.json` the ownership record.
// Writes to one story are serialized, files are replaced atomically.
class StoryStore {
 public:
  explicit StoryStore(std::filesystem::path dir);

  // The id is kept when free, deduplicated otherwise. Revision starts at 1.
  StoredStory create(Story story, StoryMeta meta);

  std::optional<StoredStory> find(std::string_view id) const;
  std::vector<StoredStory> list() const;

  // `change` sees the current state under the story's lock and returns the
  // replacement. Errors: NotFound, RevisionConflict.
  StoredStory modify(std::string_view id, std::uint64_t expected_revision,
                     const std::function<Story(const StoredStory&)>& change);

  // Errors: NotFound.
  void remove(std::string_view id);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::shared_ptr<std::mutex> lock_for(std::string_view id) const;
  std::filesystem::path story_path(std::string_view id) const;
  std::filesystem::path meta_path(std::string_view id) const;
  std::optional<StoredStory> read(std::string_view id) const;
  void write(const StoredStory& stored) const;

  std::filesystem::path dir_;
  mutable std::mutex create_mutex_;
  mutable std::mutex locks_mutex_;
  mutable std::map<std::string, std::shared_ptr<std::mutex>, std::less<>> locks_;
};

}  // namespace lodstory::service
