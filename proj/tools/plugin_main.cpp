// Reference external-system plugin: serves one builtin benchmark over the
// line-delimited JSON stdin/stdout protocol.  Used to exercise the plugin
// client end to end; certifying through this process must produce the same
// certificate as certifying the builtin in-process.

#include <CLI11.hpp>
#include <iostream>
#include <memory>
#include <string>

#include "pacsafe/benchmarks.hpp"
#include "pacsafe/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"serve a builtin benchmark over the plugin protocol"};
  std::string system_name = "vinc";
  app.add_option("--system", system_name, "builtin system name")->required();
  CLI11_PARSE(app, argc, argv);

  std::shared_ptr<const pacsafe::BlackBoxSystem> sys;
  try {
    sys = pacsafe::make_builtin_system(system_name);
  } catch (const std::exception& e) {
    std::cerr << "plugin: " << e.what() << std::endl;
    return 2;
  }

  std::string line;
  while (std::getline(std::cin, line)) {
    nlohmann::json reply;
    try {
      const nlohmann::json req = nlohmann::json::parse(line);
      const std::string op = req.at("op").get<std::string>();
      if (op == "info") {
        reply = {{"n", sys->state_dim()},
                 {"n_d", sys->disturbance_dim()},
                 {"name", sys->name()},
                 {"safe_set", sys->safe_set().to_json()}};
      } else if (op == "step") {
        const auto x = req.at("x").get<pacsafe::StateVector>();
        const auto d = req.at("d").get<pacsafe::DisturbanceVector>();
        reply = {{"x_next", sys->step(x, d)}};
      } else if (op == "sample_d") {
        const auto hint = req.at("seed_hint").get<std::uint64_t>();
        reply = {{"d", sys->sample_disturbance(hint)}};
      } else {
        reply = {{"error", "unknown op: " + op}};
      }
    } catch (const std::exception& e) {
      reply = {{"error", e.what()}};
    }
    std::cout << reply.dump() << "\n" << std::flush;
  }
  return 0;
}
