#include "lodstory/service/auth.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lodstory/error.hpp"

namespace lodstory::service {

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::Anonymous: return "anonymous";
    case Tier::External: return "external";
    case Tier::Member: return "member";
  }
  return "anonymous";
}

std::optional<Tier> parse_tier(std::string_view text) {
  if (text == "anonymous") return Tier::Anonymous;
  if (text == "external") return Tier::External;
  if (text == "member") return Tier::Member;
  return std::nullopt;
}

DevTokenProvider DevTokenProvider::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::BadRequest, std::string("token file is not JSON: ") + e.what());
  }
  auto tokens = doc.find("tokens");
  if (!doc.is_object() || tokens == doc.end() || !tokens->is_object())
    throw Error(ErrorCode::BadRequest, "token file needs a \"tokens\" object");
  std::map<std::string, Identity, std::less<>> table;
  for (const auto& [token, entry] : tokens->items()) {
    if (token.empty() || !entry.is_object() || !entry.contains("subject") ||
        !entry["subject"].is_string() || entry["subject"].get<std::string>().empty())
      throw Error(ErrorCode::BadRequest, "token entry needs a non-empty subject");
    Identity id;
    id.subject = entry["subject"].get<std::string>();
    auto membership = entry.value("membership", std::string("external"));
    auto tier = parse_tier(membership);
    if (!tier || *tier == Tier::Anonymous)
      throw Error(ErrorCode::BadRequest,
                  "membership must be \"member\" or \"external\", got \"" + membership + "\"");
    id.membership = *tier;
    table.emplace(token, std::move(id));
  }
  return DevTokenProvider(std::move(table));
}

DevTokenProvider DevTokenProvider::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read token file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::optional<Identity> DevTokenProvider::verify(std::string_view token) const {
  auto it = tokens_.find(token);
  if (it == tokens_.end()) return std::nullopt;
  return it->second;
}

AuthOutcome authenticate(const AuthProvider& provider,
                         std::optional<std::string_view> authorization) {
  AuthOutcome out;
  if (!authorization) return out;
  std::string_view value = *authorization;
  while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
  while (!value.empty() && value.back() == ' ') value.remove_suffix(1);
  if (value.empty()) return out;
  constexpr std::string_view kScheme = "bearer ";
  bool bearer = value.size() > kScheme.size();
  for (std::size_t i = 0; bearer && i < kScheme.size(); ++i) {
    bearer = std::tolower(static_cast<unsigned char>(value[i])) == kScheme[i];
  }
  if (!bearer) {
    out.token_rejected = true;
    return out;
  }
  auto token = value.substr(kScheme.size());
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  auto identity = token.empty() ? std::nullopt : provider.verify(token);
  if (!identity) {
    out.token_rejected = true;
    return out;
  }
  out.principal.subject = identity->subject;
  out.principal.tier = identity->membership == Tier::Member ? Tier::Member : Tier::External;
  return out;
}

}  // namespace lodstory::service
