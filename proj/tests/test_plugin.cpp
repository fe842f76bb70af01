#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "pacsafe/benchmarks.hpp"
#include "pacsafe/certify.hpp"
#include "pacsafe/errors.hpp"
#include "pacsafe/params.hpp"
#include "pacsafe/plugin.hpp"

using Catch::Matchers::ContainsSubstring;
using pacsafe::Certificate;
using pacsafe::ConfigError;
using pacsafe::Method;
using pacsafe::PacParams;
using pacsafe::PluginError;
using pacsafe::PluginSystem;
using pacsafe::certify;
using pacsafe::make_builtin_system;

namespace {

PacParams tiny_rbc1() {
  PacParams p;
  p.method = Method::kRbc1Scenario;
  p.alpha1 = 0.5;
  p.alpha2 = 0.5;
  p.delta = 0.01;
  p.kappa = 1;
  return p;
}

std::string server_command(const std::string& system_name) {
  return std::string(PACSAFE_PLUGIN_BIN) + " --system " + system_name;
}

// A shell one-liner that answers the info request and then replies with
// `body` to every further request.
std::string info_then(const std::string& body) {
  return "read l; echo '{\"n\":1,\"n_d\":1,\"safe_set\":{\"shape\":\"box\","
         "\"lo\":[0.0],\"hi\":[1.0]}}'; while read l; do echo '" +
         body + "'; done";
}

}  // namespace

TEST_CASE("certifying through the plugin protocol matches in-process") {
  const auto builtin = make_builtin_system("vinc");
  PluginSystem plug(server_command("vinc"));

  REQUIRE(plug.name() == "vinc");
  REQUIRE(plug.state_dim() == 2);
  REQUIRE(plug.disturbance_dim() == 1);
  const pacsafe::StateVector origin{0.0, 0.0}, corner{1.0, 1.0};
  REQUIRE(plug.safe_set().contains(origin));
  REQUIRE_FALSE(plug.safe_set().contains(corner));

  const Certificate through_pipe = certify(plug, tiny_rbc1(), 7);
  const Certificate in_process = certify(*builtin, tiny_rbc1(), 7);
  REQUIRE(through_pipe.canonical_string() == in_process.canonical_string());
  REQUIRE(through_pipe.accepted);
}

TEST_CASE("plugin construction rejects bad configuration") {
  REQUIRE_THROWS_AS(PluginSystem(""), ConfigError);
  REQUIRE_THROWS_AS(PluginSystem("cat", 0.0), ConfigError);
  REQUIRE_THROWS_AS(PluginSystem("cat", -1.0), ConfigError);
}

TEST_CASE("malformed plugin replies abort the run") {
  REQUIRE_THROWS_MATCHES(
      PluginSystem("while read l; do echo notjson; done"), PluginError,
      Catch::Matchers::MessageMatches(
          ContainsSubstring("not a JSON object")));

  REQUIRE_THROWS_MATCHES(
      PluginSystem("while read l; do echo '{\"error\":\"nope\"}'; done"),
      PluginError,
      Catch::Matchers::MessageMatches(
          ContainsSubstring("plugin reported an error")));

  // Structurally valid JSON whose fields are unusable.
  REQUIRE_THROWS_MATCHES(
      PluginSystem("while read l; do echo '{\"n\":\"x\"}'; done"), PluginError,
      Catch::Matchers::MessageMatches(ContainsSubstring("info reply")));

  // Safe set dimension contradicting the reported state dimension.
  REQUIRE_THROWS_MATCHES(
      PluginSystem("while read l; do echo '{\"n\":2,\"n_d\":1,"
                   "\"safe_set\":{\"shape\":\"box\",\"lo\":[0.0],"
                   "\"hi\":[1.0]}}'; done"),
      PluginError,
      Catch::Matchers::MessageMatches(ContainsSubstring("dimension")));
}

TEST_CASE("plugin timeouts and crashes surface as errors") {
  REQUIRE_THROWS_MATCHES(
      PluginSystem("sleep 30", 0.2), PluginError,
      Catch::Matchers::MessageMatches(ContainsSubstring("timed out")));

  // Immediate exit: depending on timing the failure is seen as EOF on the
  // reply pipe or as a failed request write; both must become PluginError.
  REQUIRE_THROWS_AS(PluginSystem("true"), PluginError);
}

TEST_CASE("a desynchronized plugin is poisoned after the first failure") {
  PluginSystem plug(info_then("garbage"));
  REQUIRE(plug.name() == "plugin");  // no name in the info reply
  REQUIRE(plug.state_dim() == 1);

  REQUIRE_THROWS_AS(plug.step({0.5}, {0.0}), PluginError);
  // The child was killed; later requests must fail fast, not hang.
  REQUIRE_THROWS_MATCHES(
      plug.step({0.5}, {0.0}), PluginError,
      Catch::Matchers::MessageMatches(ContainsSubstring("not running")));
  REQUIRE_THROWS_AS(plug.sample_disturbance(1), PluginError);
}

TEST_CASE("plugin replies are validated field by field") {
  // Wrong vector length.
  PluginSystem wrong_len(info_then("{\"x_next\":[0.1,0.2]}"));
  REQUIRE_THROWS_MATCHES(
      wrong_len.step({0.5}, {0.0}), PluginError,
      Catch::Matchers::MessageMatches(ContainsSubstring("size")));

  // Missing field.
  PluginSystem missing(info_then("{\"d\":[0.0]}"));
  REQUIRE_THROWS_MATCHES(
      missing.step({0.5}, {0.0}), PluginError,
      Catch::Matchers::MessageMatches(ContainsSubstring("x_next")));

  // Entries that do not decode to finite numbers.
  PluginSystem nonfinite(info_then("{\"x_next\":[1e999]}"));
  REQUIRE_THROWS_AS(nonfinite.step({0.5}, {0.0}), PluginError);

  // Caller-side dimension bugs never reach the wire.
  PluginSystem ok(server_command("vinc"));
  REQUIRE_THROWS_AS(ok.step({0.5}, {0.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(ok.step({0.5, 0.5}, {}), std::invalid_argument);
  // ...and the connection stays healthy afterwards.
  REQUIRE(ok.step({0.1, 0.1}, {0.0}).size() == 2);
}
