#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "lodstory/story.hpp"

namespace lodstory::service {

enum class TargetKind { MainSite, ExternalCatalogue };

std::string_view to_string(TargetKind kind);

struct PublishTarget {
  TargetKind kind = TargetKind::MainSite;
  std::filesystem::path root;
  std::string base_url;
};

struct SiteIndexEntry {
  std::string id;
  std::string title;
  std::string url;
  friend bool operator==(const SiteIndexEntry&, const SiteIndexEntry&) = default;
};

struct SiteSection {
  std::string title;
  std::vector<SiteIndexEntry> stories;
  friend bool operator==(const SiteSection&, const SiteSection&) = default;
};

struct SiteIndex {
  std::vector<SiteSection> sections;
  friend bool operator==(const SiteIndex&, const SiteIndex&) = default;
};

std::string site_index_json(const SiteIndex& index);

struct Publication {
  std::string url;
  std::filesystem::path file;
};

// Section title used for main-site stories that have none.
inline constexpr std::string_view kDefaultSection = "General";
// Single group listed in the external catalogue index.
inline constexpr std::string_view kCatalogueSection = "Catalogue";

using WallClock = std::function<std::chrono::system_clock::time_point()>;

// Writes published HTML into the two static-site trees:
//   main site:  {root}/stories/{section-slug}/{id}/index.html
//   catalogue:  {root}/{id}/index.html
// Each story directory also holds publication.json, from which index.json
// at the target root is rebuilt. One publish at a time per target.
class Publisher {
 public:
  Publisher(PublishTarget main_site, PublishTarget external, WallClock clock = std::chrono::system_clock::now);

  // Republishing keeps the original publication time. Errors:
  // PublishTargetUnavailable.
  Publication publish(TargetKind kind, const Story& story, std::string_view html);

  // Removes the story from the target, true when something was removed.
  bool unpublish(TargetKind kind, std::string_view story_id);

  // Errors: PublishTargetUnavailable.
  SiteIndex rebuild_site_index(TargetKind kind);
  // Scans without writing index.json.
  SiteIndex scan(TargetKind kind) const;

  const PublishTarget& target(TargetKind kind) const;

 private:
  struct Record {
    std::string id;
    std::string title;
    std::string section;
    std::string published_at;
    std::string url;
    std::filesystem::path dir;
  };
  std::vector<Record> records(const PublishTarget& target) const;
  SiteIndex rebuild_locked(const PublishTarget& target);
  std::mutex& mutex_for(TargetKind kind);

  PublishTarget main_;
  PublishTarget external_;
  WallClock clock_;
  std::mutex main_mutex_;
  std::mutex external_mutex_;
};

}  // namespace lodstory::service
