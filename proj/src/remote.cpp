#include "bbopt/remote.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sodium.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <json.hpp>

#include "bbopt/error.hpp"

namespace bbopt {

using nlohmann::json;

namespace wire {

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  const int variant = sodium_base64_VARIANT_ORIGINAL;
  std::string out(sodium_base64_encoded_len(bytes.size(), variant), '\0');
  sodium_bin2base64(out.data(), out.size(), bytes.data(), bytes.size(),
                    variant);
  out.resize(std::strlen(out.c_str()));
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  std::vector<std::uint8_t> out(text.size() / 4 * 3 + 3);
  std::size_t len = 0;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(),
                        nullptr, &len, nullptr,
                        sodium_base64_VARIANT_ORIGINAL) != 0)
    throw Error("invalid base64 payload");
  out.resize(len);
  return out;
}

namespace {

std::vector<std::uint8_t> pixel_bytes(const ImageTensor& image) {
  const auto data = image.data();
  const auto* p = reinterpret_cast<const std::uint8_t*>(data.data());
  return {p, p + data.size_bytes()};
}

std::string dump_line(const json& j) { return j.dump() + "\n"; }

}  // namespace

std::string encode_request(std::uint64_t id, const ImageTensor& image) {
  json j;
  j["id"] = id;
  j["shape"] = {image.channels(), image.height(), image.width()};
  j["dtype"] = "f32le";
  j["data"] = base64_encode(pixel_bytes(image));
  return dump_line(j);
}

std::string encode_healthcheck(std::uint64_t id) {
  json j;
  j["id"] = id;
  j["shape"] = {0, 0, 0};
  j["dtype"] = "f32le";
  j["data"] = "";
  return dump_line(j);
}

Request decode_request(const std::string& line) {
  const json j = json::parse(line);
  Request req;
  req.id = j.at("id").get<std::uint64_t>();
  if (j.value("dtype", std::string("f32le")) != "f32le")
    throw Error("unsupported dtype");
  const auto shape = j.at("shape").get<std::vector<std::size_t>>();
  if (shape.size() != 3) throw Error("shape must have 3 entries");
  const auto bytes = base64_decode(j.at("data").get<std::string>());
  const std::size_t n = shape[0] * shape[1] * shape[2];
  if (n == 0) {
    if (!bytes.empty()) throw Error("healthcheck carries data");
    return req;
  }
  if (bytes.size() != n * 4) throw Error("data length does not match shape");
  std::vector<float> pixels(n);
  std::memcpy(pixels.data(), bytes.data(), bytes.size());
  req.image = ImageTensor(shape[0], shape[1], shape[2], std::move(pixels));
  return req;
}

std::string encode_response(std::uint64_t id, const Logits& logits) {
  json j;
  j["id"] = id;
  j["logits"] = logits;
  j["classes"] = logits.size();
  return dump_line(j);
}

std::string encode_health_response(std::uint64_t id, std::size_t classes,
                                   const std::string& model) {
  json j;
  j["id"] = id;
  j["logits"] = json::array();
  j["classes"] = classes;
  j["error"] = nullptr;
  j["model"] = model;
  return dump_line(j);
}

std::string encode_error(std::uint64_t id, const std::string& message) {
  json j;
  j["id"] = id;
  j["error"] = message;
  return dump_line(j);
}

Response decode_response(const std::string& line, std::uint64_t expected_id) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw OracleUnavailable(std::string("malformed response: ") + e.what());
  }
  try {
    Response r;
    r.id = j.at("id").get<std::uint64_t>();
    if (r.id != expected_id)
      throw OracleUnavailable("response id " + std::to_string(r.id) +
                              " does not match request id " +
                              std::to_string(expected_id));
    if (auto it = j.find("error"); it != j.end() && !it->is_null())
      throw OracleUnavailable("server error: " + it->dump());
    r.logits = j.at("logits").get<Logits>();
    r.classes = j.at("classes").get<std::size_t>();
    r.model = j.value("model", std::string());
    return r;
  } catch (const json::exception& e) {
    throw OracleUnavailable(std::string("malformed response: ") + e.what());
  }
}

}  // namespace wire

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
  throw OracleUnavailable(what + ": " + std::strerror(errno));
}

void send_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n =
        ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("send");
    }
    sent += static_cast<std::size_t>(n);
  }
}

void init_sodium() {
  if (sodium_init() < 0) throw Error("libsodium initialization failed");
}

}  // namespace

RemoteOracle::RemoteOracle(std::string host, std::uint16_t port,
                           std::chrono::milliseconds timeout)
    : host_(std::move(host)), port_(port), timeout_(timeout) {
  init_sodium();
}

RemoteOracle::~RemoteOracle() { disconnect(); }

std::string RemoteOracle::describe() const {
  return "remote:" + host_ + ":" + std::to_string(port_);
}

void RemoteOracle::disconnect() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
  pending_.clear();
}

void RemoteOracle::ensure_connected() {
  if (fd_ >= 0) return;
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(port_);
  if (int rc = ::getaddrinfo(host_.c_str(), port.c_str(), &hints, &res);
      rc != 0)
    throw OracleUnavailable("resolve " + host_ + ": " + gai_strerror(rc));
  std::string last_error = "no addresses";
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      fd_ = fd;
      break;
    }
    last_error = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(res);
  if (fd_ < 0)
    throw OracleUnavailable("connect " + describe() + ": " + last_error);
}

std::string RemoteOracle::round_trip(const std::string& line) {
  ensure_connected();
  try {
    send_all(fd_, line);
    for (;;) {
      if (auto nl = pending_.find('\n'); nl != std::string::npos) {
        std::string reply = pending_.substr(0, nl);
        pending_.erase(0, nl + 1);
        return reply;
      }
      pollfd pfd{fd_, POLLIN, 0};
      const int ready = ::poll(&pfd, 1, static_cast<int>(timeout_.count()));
      if (ready == 0) throw OracleUnavailable("timeout waiting for response");
      if (ready < 0) {
        if (errno == EINTR) continue;
        throw_errno("poll");
      }
      char buf[65536];
      const ssize_t n = ::recv(fd_, buf, sizeof buf, 0);
      if (n == 0) throw OracleUnavailable("connection closed by server");
      if (n < 0) {
        if (errno == EINTR) continue;
        throw_errno("recv");
      }
      pending_.append(buf, static_cast<std::size_t>(n));
    }
  } catch (...) {
    disconnect();
    throw;
  }
}

Logits RemoteOracle::logits(const ImageTensor& image) {
  std::lock_guard lock(mutex_);
  const std::uint64_t id = next_id_++;
  auto response =
      wire::decode_response(round_trip(wire::encode_request(id, image)), id);
  if (response.logits.size() != response.classes)
    throw OracleUnavailable("logit count does not match declared classes");
  if (response.classes < 2)
    throw OracleUnavailable("server reported fewer than 2 classes");
  if (classes_ == 0) classes_ = response.classes;
  if (response.classes != classes_)
    throw OracleUnavailable("class count changed between responses");
  return std::move(response.logits);
}

wire::Response RemoteOracle::healthcheck() {
  std::lock_guard lock(mutex_);
  const std::uint64_t id = next_id_++;
  auto response =
      wire::decode_response(round_trip(wire::encode_healthcheck(id)), id);
  if (classes_ == 0) classes_ = response.classes;
  return response;
}

std::size_t RemoteOracle::num_classes() const {
  if (classes_ == 0) const_cast<RemoteOracle*>(this)->healthcheck();
  return classes_;
}

std::unique_ptr<RemoteOracle> remote_oracle(const std::string& endpoint) {
  const auto colon = endpoint.rfind(':');
  if (colon == std::string::npos || colon == 0 ||
      colon + 1 == endpoint.size())
    throw ConfigError("endpoint must be HOST:PORT, got '" + endpoint + "'");
  unsigned long port = 0;
  try {
    std::size_t used = 0;
    port = std::stoul(endpoint.substr(colon + 1), &used);
    if (used != endpoint.size() - colon - 1) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw ConfigError("invalid port in endpoint '" + endpoint + "'");
  }
  if (port == 0 || port > 65535)
    throw ConfigError("port out of range in endpoint '" + endpoint + "'");
  return std::make_unique<RemoteOracle>(endpoint.substr(0, colon),
                                        static_cast<std::uint16_t>(port));
}

LineServer::LineServer(Handler handler, std::uint16_t port)
    : handler_(std::move(handler)) {
  init_sodium();
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw_errno("socket");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) <
          0 ||
      ::listen(listen_fd_, 16) < 0) {
    ::close(listen_fd_);
    throw_errno("bind/listen");
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  acceptor_ = std::thread([this] { accept_loop(); });
}

LineServer::~LineServer() { stop(); }

void LineServer::stop() {
  if (stopping_.exchange(true)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(conn_mutex_);
    for (int fd : conn_fds_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
}

void LineServer::accept_loop() {
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (stopping_) return;
      if (errno == EINTR) continue;
      return;
    }
    std::lock_guard lock(conn_mutex_);
    if (stopping_) {
      ::close(fd);
      return;
    }
    conn_fds_.push_back(fd);
    workers_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void LineServer::serve_connection(int fd) {
  std::string buffer;
  char chunk[65536];
  for (;;) {
    const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t nl;
    bool ok = true;
    while (ok && (nl = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      std::string reply = handler_(line);
      if (reply.empty() || reply.back() != '\n') reply.push_back('\n');
      try {
        send_all(fd, reply);
      } catch (const OracleUnavailable&) {
        ok = false;
      }
    }
    if (!ok) break;
  }
  std::lock_guard lock(conn_mutex_);
  std::erase(conn_fds_, fd);
  ::close(fd);
}

LineServer::Handler make_model_handler(Oracle& model, std::string model_name) {
  auto gate = std::make_shared<std::mutex>();
  return [&model, gate, name = std::move(model_name)](const std::string& line) {
    std::uint64_t id = 0;
    try {
      id = json::parse(line).at("id").get<std::uint64_t>();
    } catch (const std::exception&) {
      return wire::encode_error(0, "malformed request");
    }
    try {
      const auto req = wire::decode_request(line);
      std::lock_guard lock(*gate);
      if (!req.image)
        return wire::encode_health_response(id, model.num_classes(), name);
      return wire::encode_response(id, model.logits(*req.image));
    } catch (const std::exception& e) {
      return wire::encode_error(id, e.what());
    }
  };
}

}  // namespace bbopt
