#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "podium/hub.hpp"

namespace podium {

/// Newline-delimited JSON over TCP in front of a SessionHub.
class TcpServer {
public:
    TcpServer(SessionHub& hub, std::string host = "127.0.0.1", std::uint16_t port = kDefaultPort);
    ~TcpServer();
    TcpServer(const TcpServer&) = delete;
    TcpServer& operator=(const TcpServer&) = delete;

    /// Throws Error{BindFailure}.
    void start();
    void stop();
    /// Bound port; differs from the requested one when that was 0.
    std::uint16_t port() const { return bound_port_; }

private:
    struct Conn;

    void accept_loop();
    void read_loop(std::shared_ptr<Conn> conn);
    void tick_loop();
    std::int64_t now_ms() const;

    SessionHub& hub_;
    std::string host_;
    std::uint16_t port_;
    std::uint16_t bound_port_ = 0;
    int listen_fd_ = -1;
    int wake_pipe_[2] = {-1, -1};
    std::atomic<bool> running_{false};
    std::thread acceptor_;
    std::thread ticker_;
    std::mutex conns_mutex_;
    std::list<std::shared_ptr<Conn>> conns_;
    std::chrono::steady_clock::time_point epoch_;
};

/// Minimal blocking line client, used by tests and tooling.
class TcpClient {
public:
    TcpClient() = default;
    ~TcpClient();
    TcpClient(const TcpClient&) = delete;
    TcpClient& operator=(const TcpClient&) = delete;

    bool connect(const std::string& host, std::uint16_t port);
    bool send_line(const std::string& line);
    /// Waits up to timeout_ms; nullopt on timeout or close.
    std::optional<std::string> read_line(int timeout_ms);
    void close();
    bool is_open() const { return fd_ >= 0; }

private:
    int fd_ = -1;
    std::string buffer_;
};

}  // namespace podium
