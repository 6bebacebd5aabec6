#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace lodstory::service {

enum class Tier { Anonymous, External, Member };

std::string_view to_string(Tier tier);
std::optional<Tier> parse_tier(std::string_view text);

struct Principal {
  std::optional<std::string> subject;  // never set for anonymous
  Tier tier = Tier::Anonymous;

  static Principal anonymous() { return {}; }
  bool authenticated() const { return tier != Tier::Anonymous; }
  friend bool operator==(const Principal&, const Principal&) = default;
};

struct Identity {
  std::string subject;
  Tier membership = Tier::External;  // External or Member
};

class AuthProvider {
 public:
  virtual ~AuthProvider() = default;
  // nullopt rejects the token.
  virtual std::optional<Identity> verify(std::string_view token) const = 0;
};

// Static token table, for development and tests:
//   {"tokens": {"<token>": {"subject": "alice", "membership": "member"}}}
class DevTokenProvider final : public AuthProvider {
 public:
  explicit DevTokenProvider(std::map<std::string, Identity, std::less<>> tokens)
      : tokens_(std::move(tokens)) {}

  // Errors: IoError, BadRequest (malformed file).
  static DevTokenProvider from_file(const std::filesystem::path& path);
  static DevTokenProvider from_json(std::string_view text);

  std::optional<Identity> verify(std::string_view token) const override;

 private:
  std::map<std::string, Identity, std::less<>> tokens_;
};

// Accepts no token at all.
class NoAuthProvider final : public AuthProvider {
 public:
  std::optional<Identity> verify(std::string_view) const override { return std::nullopt; }
};

struct AuthOutcome {
  Principal principal;
  bool token_rejected = false;  // a token was sent but did not verify
};

// `authorization` is the raw Authorization header value, if any. Anything
// other than a verified Bearer token degrades to anonymous.
AuthOutcome authenticate(const AuthProvider& provider,
                         std::optional<std::string_view> authorization);

}  // namespace lodstory::service
