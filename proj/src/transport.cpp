#include "dca/transport.hpp"

#include <boost/asio.hpp>

#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace dca {

namespace asio = boost::asio;
using asio::ip::tcp;

std::string encode_frame(std::string_view payload) {
  if (payload.size() > kMaxFrame) throw TransportError("frame exceeds maximum size");
  const auto n = static_cast<std::uint32_t>(payload.size());
  std::string out;
  out.reserve(4 + payload.size());
  out.push_back(static_cast<char>((n >> 24) & 0xff));
  out.push_back(static_cast<char>((n >> 16) & 0xff));
  out.push_back(static_cast<char>((n >> 8) & 0xff));
  out.push_back(static_cast<char>(n & 0xff));
  out.append(payload);
  return out;
}

std::uint32_t decode_length(const unsigned char h[4]) {
  return (std::uint32_t{h[0]} << 24) | (std::uint32_t{h[1]} << 16) | (std::uint32_t{h[2]} << 8) |
         std::uint32_t{h[3]};
}

namespace {

struct Inbox {
  std::deque<Event> events;
  bool open = true;
};

struct SessionQueue {
  std::mutex mu;
  std::condition_variable cv;
  std::vector<Inbox> inboxes;
  SessionStats stats;
};

void receive_loop(tcp::socket& sock, std::size_t index, SessionQueue& q,
                  const std::function<void(const std::string&)>& log) {
  auto note = [&](const std::string& msg) {
    if (log) log("client " + std::to_string(index) + ": " + msg);
  };
  auto finish = [&](bool protocol_error, bool partial) {
    std::lock_guard lk(q.mu);
    q.inboxes[index].open = false;
    if (protocol_error) ++q.stats.protocol_errors;
    if (partial) ++q.stats.partial_frames;
    q.cv.notify_all();
  };

  double last = 0.0;
  std::string body;
  std::size_t frame_no = 0;
  for (;;) {
    unsigned char header[4];
    boost::system::error_code ec;
    const std::size_t got = asio::read(sock, asio::buffer(header), ec);
    if (ec) {
      if (got > 0) note("partial frame header discarded at disconnect");
      finish(false, got > 0);
      return;
    }
    const std::uint32_t len = decode_length(header);
    if (len > kMaxFrame) {
      note("frame of " + std::to_string(len) + " bytes exceeds limit; closing connection");
      sock.close(ec);
      finish(true, false);
      return;
    }
    body.resize(len);
    const std::size_t body_got = asio::read(sock, asio::buffer(body), ec);
    if (ec) {
      note("partial frame discarded at disconnect (" + std::to_string(body_got) + "/" +
           std::to_string(len) + " bytes)");
      finish(false, true);
      return;
    }
    ++frame_no;
    std::optional<Event> e;
    try {
      e = parse_event(body, frame_no);
      if (e->timestamp < last) throw std::invalid_argument("timestamp decreases");
    } catch (const std::exception& ex) {
      note(std::string("bad frame: ") + ex.what() + "; closing connection");
      sock.close(ec);
      finish(true, false);
      return;
    }
    last = e->timestamp;
    std::lock_guard lk(q.mu);
    q.inboxes[index].events.push_back(std::move(*e));
    ++q.stats.frames;
    q.cv.notify_all();
  }
}

}  // namespace

struct TissueServer::Impl {
  PopulationConfig cfg;
  ServerOptions opts;
  asio::io_context io;
  tcp::acceptor acceptor{io};
};

TissueServer::TissueServer(PopulationConfig cfg, ServerOptions opts)
    : impl_(std::make_unique<Impl>()) {
  cfg.validate();
  if (opts.expected_clients == 0) throw std::invalid_argument("expected_clients must be positive");
  impl_->cfg = std::move(cfg);
  impl_->opts = std::move(opts);
  try {
    tcp::endpoint ep(asio::ip::make_address(impl_->opts.host), impl_->opts.port);
    impl_->acceptor.open(ep.protocol());
    impl_->acceptor.set_option(tcp::acceptor::reuse_address(true));
    impl_->acceptor.bind(ep);
    impl_->acceptor.listen();
  } catch (const boost::system::system_error& e) {
    throw TransportError("cannot listen on " + impl_->opts.host + ":" +
                         std::to_string(impl_->opts.port) + ": " + e.what());
  }
}

TissueServer::~TissueServer() = default;

std::uint16_t TissueServer::port() const { return impl_->acceptor.local_endpoint().port(); }

std::unique_ptr<TissueEngine> TissueServer::run_session(TissueEngine::RecordCallback on_record,
                                                        SessionStats* stats) {
  const std::size_t n = impl_->opts.expected_clients;
  std::vector<tcp::socket> sockets;
  sockets.reserve(n);
  while (sockets.size() < n) sockets.push_back(impl_->acceptor.accept());

  SessionQueue q;
  q.inboxes.resize(n);
  std::vector<std::thread> readers;
  readers.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    readers.emplace_back(receive_loop, std::ref(sockets[i]), i, std::ref(q),
                         std::cref(impl_->opts.log));
  }

  auto engine = std::make_unique<TissueEngine>(impl_->cfg);
  if (on_record) engine->on_record(std::move(on_record));

  auto join_all = [&] {
    for (auto& t : readers) t.join();
  };

  try {
    for (;;) {
      std::unique_lock lk(q.mu);
      std::optional<std::size_t> pick;
      q.cv.wait(lk, [&] {
        pick.reset();
        bool all_closed = true;
        for (std::size_t i = 0; i < n; ++i) {
          const auto& in = q.inboxes[i];
          if (in.open) all_closed = false;
          if (in.events.empty()) {
            if (in.open) return false;  // cannot know what this client sends next
            continue;
          }
          if (!pick || in.events.front().timestamp < q.inboxes[*pick].events.front().timestamp) {
            pick = i;
          }
        }
        return pick.has_value() || all_closed;
      });
      if (!pick) break;
      Event e = std::move(q.inboxes[*pick].events.front());
      q.inboxes[*pick].events.pop_front();
      lk.unlock();
      engine->accept(e);
    }
  } catch (...) {
    boost::system::error_code ec;
    for (auto& s : sockets) s.close(ec);
    join_all();
    throw;
  }
  join_all();
  engine->finish();
  if (stats) *stats = q.stats;
  return engine;
}

struct RemoteSink::Impl {
  asio::io_context io;
  tcp::socket sock{io};
};

RemoteSink::RemoteSink(const std::string& host, std::uint16_t port)
    : impl_(std::make_unique<Impl>()) {
  try {
    tcp::resolver resolver(impl_->io);
    asio::connect(impl_->sock, resolver.resolve(host, std::to_string(port)));
  } catch (const boost::system::system_error& e) {
    throw TransportError("cannot connect to " + host + ":" + std::to_string(port) + ": " +
                         e.what());
  }
}

RemoteSink::~RemoteSink() {
  boost::system::error_code ec;
  impl_->sock.close(ec);
}

void RemoteSink::send_raw(std::string_view bytes) {
  if (!impl_->sock.is_open()) throw TransportError("connection closed");
  boost::system::error_code ec;
  asio::write(impl_->sock, asio::buffer(bytes.data(), bytes.size()), ec);
  if (ec) throw TransportError("server disconnected: " + ec.message());
}

void RemoteSink::deliver(const Event& e) { send_raw(encode_frame(format_event(e))); }

void RemoteSink::send_frame_unchecked(std::string_view payload) {
  const auto n = static_cast<std::uint32_t>(payload.size());
  std::string out = encode_frame("");
  out[0] = static_cast<char>((n >> 24) & 0xff);
  out[1] = static_cast<char>((n >> 16) & 0xff);
  out[2] = static_cast<char>((n >> 8) & 0xff);
  out[3] = static_cast<char>(n & 0xff);
  out.append(payload);
  send_raw(out);
}

void RemoteSink::close() {
  boost::system::error_code ec;
  if (!impl_->sock.is_open()) return;
  impl_->sock.shutdown(tcp::socket::shutdown_send, ec);
  impl_->sock.close(ec);
}

}  // namespace dca
