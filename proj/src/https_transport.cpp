#define CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_ZLIB_SUPPORT
#include <httplib.h>

#include <chrono>
#include <thread>

#include "defhyper/so_client.hpp"

namespace defhyper {

Transport https_transport() {
  return [](const std::string& host, const std::string& path) {
    httplib::SSLClient client(host, 443);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    client.set_decompress(true);
    httplib::Headers headers = {{"Accept-Encoding", "gzip"}};
    HttpResponse out;
    if (auto res = client.Get(path, headers)) {
      out.status = res->status;
      out.body = res->body;
    } else {
      out.error = httplib::to_string(res.error());
    }
    return out;
  };
}

Sleeper real_sleeper() {
  return [](int seconds) { std::this_thread::sleep_for(std::chrono::seconds(seconds)); };
}

}  // namespace defhyper
