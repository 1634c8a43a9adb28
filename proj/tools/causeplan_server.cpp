#include <CLI11.hpp>
#include <httplib.h>

#include <csignal>
#include <iostream>

#include "causeplan/service/http.hpp"
#include "causeplan/service/service.hpp"

namespace {

httplib::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HTTP service for the causal-model assembly planner"};
  std::string listen = "127.0.0.1:8080";
  std::string catalog_dir = "data/catalog";
  std::string data_dir = "sessions";
  causeplan::service::ServiceOptions options;

  app.add_option("--listen", listen, "host:port")->envname("CAUSEPLAN_LISTEN")->capture_default_str();
  app.add_option("--catalog", catalog_dir, "Object catalog directory")->envname("CAUSEPLAN_CATALOG")->capture_default_str();
  app.add_option("--data", data_dir, "Session data directory")->envname("CAUSEPLAN_DATA")->capture_default_str();
  app.add_option("--discount", options.planner.discount)->envname("CAUSEPLAN_DISCOUNT")->capture_default_str();
  app.add_option("--epsilon", options.planner.epsilon)->envname("CAUSEPLAN_EPSILON")->capture_default_str();
  app.add_option("--max-states", options.planner.max_states)->envname("CAUSEPLAN_MAX_STATES")->capture_default_str();
  app.add_option("--workers", options.worker_cap, "Concurrent planning runs")
      ->envname("CAUSEPLAN_WORKERS")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  auto colon = listen.rfind(':');
  if (colon == std::string::npos) {
    std::cerr << "error: --listen must be host:port\n";
    return 2;
  }
  std::string host = listen.substr(0, colon);
  int port = std::stoi(listen.substr(colon + 1));

  try {
    auto catalog = causeplan::load_catalog(catalog_dir);
    causeplan::service::SessionStore store(data_dir);
    causeplan::service::Service service(std::move(catalog), store, options);

    httplib::Server server;
    server.new_task_queue = [&] { return new httplib::ThreadPool(std::max<std::size_t>(2, options.worker_cap * 2)); };
    causeplan::service::mount_routes(server, service);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    std::cerr << "listening on " << host << ":" << port << " (" << service.catalog().objects().size()
              << " objects)\n";
    if (!server.listen(host, port)) {
      std::cerr << "error: cannot listen on " << listen << "\n";
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
