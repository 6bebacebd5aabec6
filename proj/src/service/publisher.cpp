#include "lodstory/service/publisher.hpp"

#include <algorithm>
#include <ctime>
#include <json.hpp>
#include <system_error>

#include "lodstory/detail/files.hpp"
#include "lodstory/error.hpp"

namespace lodstory::service {

namespace {

constexpr std::string_view kRecordFile = "publication.json";

[[noreturn]] void unavailable(const PublishTarget& t, const std::string& what) {
  throw Error(ErrorCode::PublishTargetUnavailable,
              std::string(to_string(t.kind)) + " target " + t.root.string() + ": " + what);
}

std::string iso_utc(std::chrono::system_clock::time_point tp) {
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(tp.time_since_epoch()).count();
  std::time_t secs = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms % 1000));
  return out;
}

std::string join_url(std::string base, std::string_view path) {
  while (!base.empty() && base.back() == '/') base.pop_back();
  return base + std::string(path);
}

void ensure_root(const PublishTarget& t) {
  std::error_code ec;
  std::filesystem::create_directories(t.root, ec);
  if (ec || !std::filesystem::is_directory(t.root, ec)) unavailable(t, "not a writable directory");
}

}  // namespace

std::string_view to_string(TargetKind kind) {
  return kind == TargetKind::MainSite ? "main_site" : "external_catalogue";
}

std::string site_index_json(const SiteIndex& index) {
  nlohmann::ordered_json doc;
  doc["sections"] = nlohmann::ordered_json::array();
  for (const auto& s : index.sections) {
    nlohmann::ordered_json section;
    section["title"] = s.title;
    section["stories"] = nlohmann::ordered_json::array();
    for (const auto& e : s.stories) {
      section["stories"].push_back({{"id", e.id}, {"title", e.title}, {"url", e.url}});
    }
    doc["sections"].push_back(std::move(section));
  }
  return doc.dump(2) + "\n";
}

Publisher::Publisher(PublishTarget main_site, PublishTarget external, WallClock clock)
    : main_(std::move(main_site)), external_(std::move(external)), clock_(std::move(clock)) {
  main_.kind = TargetKind::MainSite;
  external_.kind = TargetKind::ExternalCatalogue;
}

const PublishTarget& Publisher::target(TargetKind kind) const {
  return kind == TargetKind::MainSite ? main_ : external_;
}

std::mutex& Publisher::mutex_for(TargetKind kind) {
  return kind == TargetKind::MainSite ? main_mutex_ : external_mutex_;
}

std::vector<Publisher::Record> Publisher::records(const PublishTarget& t) const {
  std::vector<Record> out;
  std::error_code ec;
  auto scan_dir = t.kind == TargetKind::MainSite ? t.root / "stories" : t.root;
  if (!std::filesystem::exists(scan_dir, ec)) return out;
  auto options = std::filesystem::directory_options::skip_permission_denied;
  for (auto it = std::filesystem::recursive_directory_iterator(scan_dir, options, ec);
       !ec && it != std::filesystem::recursive_directory_iterator(); it.increment(ec)) {
    if (it.depth() > (t.kind == TargetKind::MainSite ? 2 : 1)) {
      it.disable_recursion_pending();
      continue;
    }
    if (it->path().filename() != kRecordFile) continue;
    try {
      auto doc = nlohmann::json::parse(detail::read_file(it->path()));
      Record r;
      r.id = doc.at("id").get<std::string>();
      r.title = doc.at("title").get<std::string>();
      r.section = doc.at("section").get<std::string>();
      r.published_at = doc.at("published_at").get<std::string>();
      r.url = doc.at("url").get<std::string>();
      r.dir = it->path().parent_path();
      std::error_code exists_ec;
      if (std::filesystem::exists(r.dir / "index.html", exists_ec)) out.push_back(std::move(r));
    } catch (const nlohmann::json::exception&) {
      // a half-written or foreign record is not a publication
    } catch (const Error&) {
    }
  }
  if (ec) unavailable(t, "cannot scan: " + ec.message());
  return out;
}

SiteIndex Publisher::scan(TargetKind kind) const {
  const auto& t = target(kind);
  auto recs = records(t);
  std::sort(recs.begin(), recs.end(), [](const Record& a, const Record& b) {
    return std::tie(a.section, a.published_at, a.id) < std::tie(b.section, b.published_at, b.id);
  });
  SiteIndex index;
  for (const auto& r : recs) {
    if (index.sections.empty() || index.sections.back().title != r.section)
      index.sections.push_back({r.section, {}});
    index.sections.back().stories.push_back({r.id, r.title, r.url});
  }
  return index;
}

SiteIndex Publisher::rebuild_locked(const PublishTarget& t) {
  ensure_root(t);
  auto index = scan(t.kind);
  try {
    detail::write_file_atomic(t.root / "index.json", site_index_json(index));
  } catch (const Error& e) {
    unavailable(t, e.what());
  }
  return index;
}

SiteIndex Publisher::rebuild_site_index(TargetKind kind) {
  std::lock_guard guard(mutex_for(kind));
  return rebuild_locked(target(kind));
}

Publication Publisher::publish(TargetKind kind, const Story& story, std::string_view html) {
  std::lock_guard guard(mutex_for(kind));
  const auto& t = target(kind);
  ensure_root(t);

  std::string section;
  std::filesystem::path dir;
  std::string url;
  if (kind == TargetKind::MainSite) {
    section = story.section && story.section->find_first_not_of(" \t") != std::string::npos
                  ? *story.section
                  : std::string(kDefaultSection);
    auto slug = slugify(section);
    dir = t.root / "stories" / slug / story.id;
    url = join_url(t.base_url, "/stories/" + slug + "/" + story.id + "/");
  } else {
    section = std::string(kCatalogueSection);
    dir = t.root / story.id;
    url = join_url(t.base_url, "/" + story.id + "/");
  }

  std::string published_at;
  for (const auto& r : records(t)) {
    if (r.id != story.id) continue;
    if (published_at.empty() || r.published_at < published_at) published_at = r.published_at;
    if (r.dir != dir) {
      // the section changed since the last publication
      std::error_code ec;
      std::filesystem::remove_all(r.dir, ec);
      if (ec) unavailable(t, "cannot remove " + r.dir.string());
    }
  }
  if (published_at.empty()) published_at = iso_utc(clock_());

  nlohmann::ordered_json record;
  record["id"] = story.id;
  record["title"] = story.title;
  record["section"] = section;
  record["published_at"] = published_at;
  record["url"] = url;
  try {
    detail::write_file_atomic(dir / "index.html", html);
    detail::write_file_atomic(dir / std::string(kRecordFile), record.dump(2) + "\n");
  } catch (const Error& e) {
    unavailable(t, e.what());
  }
  rebuild_locked(t);
  return {url, dir / "index.html"};
}

bool Publisher::unpublish(TargetKind kind, std::string_view story_id) {
  std::lock_guard guard(mutex_for(kind));
  const auto& t = target(kind);
  bool removed = false;
  for (const auto& r : records(t)) {
    if (r.id != story_id) continue;
    std::error_code ec;
    std::filesystem::remove_all(r.dir, ec);
    if (ec) unavailable(t, "cannot remove " + r.dir.string());
    removed = true;
    if (kind == TargetKind::MainSite) {
      // drop the section directory once empty
      auto parent = r.dir.parent_path();
      if (std::filesystem::is_empty(parent, ec) && !ec) std::filesystem::remove(parent, ec);
    }
  }
  rebuild_locked(t);
  return removed;
}

}  // namespace lodstory::service
