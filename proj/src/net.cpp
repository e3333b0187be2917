#include "podium/net.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "podium/error.hpp"

namespace podium {

namespace {

bool write_all(int fd, std::string_view data)
{
    while (!data.empty()) {
        const auto n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            return false;
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
    return true;
}

}  // namespace

struct TcpServer::Conn {
    int fd = -1;
    ConnectionId id = 0;
    std::mutex write_mutex;
    std::thread reader;
    std::atomic<bool> done{false};

    void shutdown()
    {
        std::lock_guard lock(write_mutex);
        if (fd >= 0) {
            ::shutdown(fd, SHUT_RDWR);
        }
    }
};

TcpServer::TcpServer(SessionHub& hub, std::string host, std::uint16_t port)
    : hub_(hub), host_(std::move(host)), port_(port)
{}

TcpServer::~TcpServer() { stop(); }

std::int64_t TcpServer::now_ms() const
{
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 epoch_)
        .count();
}

void TcpServer::start()
{
    auto fail = [&](const std::string& what) {
        const std::string reason = std::strerror(errno);
        if (listen_fd_ >= 0) {
            ::close(listen_fd_);
            listen_fd_ = -1;
        }
        throw Error(ErrorCode::BindFailure,
                    what + " " + host_ + ":" + std::to_string(port_) + ": " + reason);
    };
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port_);
    if (::inet_pton(AF_INET, host_.c_str(), &addr.sin_addr) != 1) {
        errno = EINVAL;
        fail("bad address");
    }
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
    if (listen_fd_ < 0) {
        fail("socket");
    }
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        fail("cannot bind");
    }
    if (::listen(listen_fd_, 16) != 0) {
        fail("cannot listen on");
    }
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    bound_port_ = ntohs(addr.sin_port);
    if (::pipe2(wake_pipe_, O_CLOEXEC) != 0) {
        fail("pipe for");
    }
    epoch_ = std::chrono::steady_clock::now();
    running_ = true;
    acceptor_ = std::thread([this] { accept_loop(); });
    ticker_ = std::thread([this] { tick_loop(); });
}

void TcpServer::stop()
{
    if (!running_.exchange(false)) {
        return;
    }
    const char byte = 0;
    [[maybe_unused]] auto n = ::write(wake_pipe_[1], &byte, 1);
    acceptor_.join();
    ticker_.join();
    std::list<std::shared_ptr<Conn>> conns;
    {
        std::lock_guard lock(conns_mutex_);
        conns.swap(conns_);
    }
    for (auto& c : conns) {
        c->shutdown();
    }
    for (auto& c : conns) {
        c->reader.join();
    }
    ::close(listen_fd_);
    ::close(wake_pipe_[0]);
    ::close(wake_pipe_[1]);
    listen_fd_ = -1;
}

void TcpServer::accept_loop()
{
    while (running_) {
        pollfd fds[2] = {{listen_fd_, POLLIN, 0}, {wake_pipe_[0], POLLIN, 0}};
        if (::poll(fds, 2, -1) < 0) {
            if (errno == EINTR) {
                continue;
            }
            return;
        }
        if (fds[1].revents) {
            return;
        }
        const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
        if (fd < 0) {
            continue;
        }
        int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        auto conn = std::make_shared<Conn>();
        conn->fd = fd;
        std::weak_ptr<Conn> weak = conn;
        conn->id = hub_.on_connect(
            [weak](const std::string& line) {
                if (auto c = weak.lock()) {
                    std::lock_guard lock(c->write_mutex);
                    if (c->fd >= 0) {
                        write_all(c->fd, line + "\n");
                    }
                }
            },
            [weak] {
                if (auto c = weak.lock()) {
                    c->shutdown();
                }
            },
            now_ms());
        std::lock_guard lock(conns_mutex_);
        for (auto it = conns_.begin(); it != conns_.end();) {
            if ((*it)->done) {
                (*it)->reader.join();
                it = conns_.erase(it);
            } else {
                ++it;
            }
        }
        conn->reader = std::thread([this, conn] { read_loop(conn); });
        conns_.push_back(conn);
    }
}

void TcpServer::read_loop(std::shared_ptr<Conn> conn)
{
    std::string buffer;
    char chunk[4096];
    while (true) {
        const auto n = ::recv(conn->fd, chunk, sizeof chunk, 0);
        if (n < 0 && errno == EINTR) {
            continue;
        }
        if (n <= 0) {
            break;
        }
        buffer.append(chunk, static_cast<std::size_t>(n));
        std::size_t nl;
        while ((nl = buffer.find('\n')) != std::string::npos) {
            auto line = buffer.substr(0, nl);
            buffer.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r') {
                line.pop_back();
            }
            if (!line.empty()) {
                hub_.on_line(conn->id, line, now_ms());
            }
        }
    }
    hub_.on_disconnect(conn->id, now_ms());
    {
        std::lock_guard lock(conn->write_mutex);
        ::close(conn->fd);
        conn->fd = -1;
    }
    conn->done = true;
}

void TcpServer::tick_loop()
{
    while (running_) {
        pollfd fd{wake_pipe_[0], POLLIN, 0};
        ::poll(&fd, 1, 250);
        if (fd.revents) {
            return;
        }
        hub_.tick(now_ms());
    }
}

TcpClient::~TcpClient() { close(); }

bool TcpClient::connect(const std::string& host, std::uint16_t port)
{
    close();
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0) {
        return false;
    }
    for (auto* p = res; p; p = p->ai_next) {
        fd_ = ::socket(p->ai_family, p->ai_socktype | SOCK_CLOEXEC, p->ai_protocol);
        if (fd_ >= 0 && ::connect(fd_, p->ai_addr, p->ai_addrlen) == 0) {
            break;
        }
        if (fd_ >= 0) {
            ::close(fd_);
            fd_ = -1;
        }
    }
    ::freeaddrinfo(res);
    return fd_ >= 0;
}

bool TcpClient::send_line(const std::string& line)
{
    return fd_ >= 0 && write_all(fd_, line + "\n");
}

std::optional<std::string> TcpClient::read_line(int timeout_ms)
{
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    while (fd_ >= 0) {
        if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
            auto line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                              deadline - std::chrono::steady_clock::now())
                              .count();
        if (left <= 0) {
            return std::nullopt;
        }
        pollfd p{fd_, POLLIN, 0};
        if (::poll(&p, 1, static_cast<int>(left)) <= 0) {
            continue;
        }
        char chunk[4096];
        const auto n = ::recv(fd_, chunk, sizeof chunk, 0);
        if (n <= 0) {
            close();
            return std::nullopt;
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
    return std::nullopt;
}

void TcpClient::close()
{
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
    buffer_.clear();
}

}  // namespace podium
