#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "bbopt/oracle.hpp"

namespace bbopt {

// Newline-delimited JSON wire protocol.
//   request:  {"id": u64, "shape": [c,h,w], "dtype": "f32le", "data": base64}
//   response: {"id": u64, "logits": [...], "classes": K}
//   error:    {"id": u64, "error": "message"}
// A request of shape [0,0,0] with empty data is a healthcheck; it is answered
// with empty logits, the class count, and a "model" field.
namespace wire {

struct Request {
  std::uint64_t id = 0;
  std::optional<ImageTensor> image;  // empty for a healthcheck
};

struct Response {
  std::uint64_t id = 0;
  Logits logits;
  std::size_t classes = 0;
  std::string model;
};

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

std::string encode_request(std::uint64_t id, const ImageTensor& image);
std::string encode_healthcheck(std::uint64_t id);
Request decode_request(const std::string& line);

std::string encode_response(std::uint64_t id, const Logits& logits);
std::string encode_health_response(std::uint64_t id, std::size_t classes,
                                   const std::string& model);
std::string encode_error(std::uint64_t id, const std::string& message);

// Throws OracleUnavailable on malformed input, an error response, or an id
// that does not match `expected_id`.
Response decode_response(const std::string& line, std::uint64_t expected_id);

}  // namespace wire

// Client side of the wire protocol over one persistent TCP connection.
// Queries are strictly sequential, so the oracle declares itself serial.
class RemoteOracle final : public Oracle {
 public:
  RemoteOracle(std::string host, std::uint16_t port,
               std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~RemoteOracle() override;

  RemoteOracle(const RemoteOracle&) = delete;
  RemoteOracle& operator=(const RemoteOracle&) = delete;

  Logits logits(const ImageTensor& image) override;
  // Issues a healthcheck on first use if no query has been answered yet.
  std::size_t num_classes() const override;
  bool serial() const override { return true; }
  std::string describe() const override;

  // Healthcheck round trip. Never touches any QueryLedger.
  wire::Response healthcheck();

 private:
  std::string round_trip(const std::string& line);
  void ensure_connected();
  void disconnect();

  std::string host_;
  std::uint16_t port_;
  std::chrono::milliseconds timeout_;
  int fd_ = -1;
  std::string pending_;
  std::uint64_t next_id_ = 1;
  mutable std::size_t classes_ = 0;
  std::mutex mutex_;
};

// Parses "HOST:PORT" and returns a connected-on-demand RemoteOracle.
std::unique_ptr<RemoteOracle> remote_oracle(const std::string& endpoint);

// Minimal line-oriented TCP server on 127.0.0.1, one thread per connection.
// Used to serve a local model over the wire protocol (loopback tests, local
// bridging). The handler maps one request line to one response line.
class LineServer {
 public:
  using Handler = std::function<std::string(const std::string& line)>;

  // port 0 picks an ephemeral port.
  LineServer(Handler handler, std::uint16_t port = 0);
  ~LineServer();

  LineServer(const LineServer&) = delete;
  LineServer& operator=(const LineServer&) = delete;

  std::uint16_t port() const { return port_; }
  std::string endpoint() const { return "127.0.0.1:" + std::to_string(port_); }
  void stop();

 private:
  void accept_loop();
  void serve_connection(int fd);

  Handler handler_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex conn_mutex_;
  std::vector<std::thread> workers_;
  std::vector<int> conn_fds_;
};

// Handler answering wire-protocol requests with a local oracle. Model access
// is serialized by one lock.
LineServer::Handler make_model_handler(Oracle& model, std::string model_name);

}  // namespace bbopt
