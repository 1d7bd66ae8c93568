#include "pswl/log.hpp"

#include <cstdlib>
#include <mutex>
#include <string>

namespace pswl::log {

namespace {
Level parse(const char* s) {
  if (!s) return Level::Warn;
  const std::string v(s);
  if (v == "error") return Level::Error;
  if (v == "info") return Level::Info;
  if (v == "debug") return Level::Debug;
  return Level::Warn;
}
std::mutex g_mu;
}  // namespace

Level threshold() {
  static const Level lvl = parse(std::getenv("PSWL_LOG"));
  return lvl;
}

void write(Level lvl, std::string_view msg) {
  if (static_cast<int>(lvl) > static_cast<int>(threshold())) return;
  static constexpr const char* names[] = {"error", "warn", "info", "debug"};
  std::lock_guard<std::mutex> lk(g_mu);
  std::fprintf(stderr, "[%s] %.*s\n", names[static_cast<int>(lvl)], static_cast<int>(msg.size()),
               msg.data());
}

}  // namespace pswl::log
