#pragma once

#include "dca/engine.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dca {

/// Frame payload limit in bytes. The 4-byte length prefix is not counted.
inline constexpr std::size_t kMaxFrame = 4096;

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 4-byte big-endian length followed by the payload. Throws TransportError if
/// the payload is larger than kMaxFrame.
std::string encode_frame(std::string_view payload);
std::uint32_t decode_length(const unsigned char header[4]);

struct ServerOptions {
  std::string host = "127.0.0.1";
  /// 0 picks a free port; see TissueServer::port().
  std::uint16_t port = 0;
  /// A session starts once this many clients have connected.
  std::size_t expected_clients = 1;
  /// Diagnostics (protocol errors, discarded partial frames). May be empty.
  std::function<void(const std::string&)> log;
};

struct SessionStats {
  std::size_t frames = 0;
  std::size_t protocol_errors = 0;
  std::size_t partial_frames = 0;
};

/// Tissue server. Each session owns a fresh TissueEngine built from the
/// population config. One receive thread per client feeds a queue; the calling
/// thread is the only consumer and the only owner of the tissue.
///
/// Events from different clients are merged by (timestamp, connection order).
/// An event is applied only once every still-open client has something queued,
/// so the merge never depends on arrival timing. A client that breaks the
/// protocol is dropped; the others carry on.
class TissueServer {
 public:
  TissueServer(PopulationConfig cfg, ServerOptions opts);
  ~TissueServer();
  TissueServer(const TissueServer&) = delete;
  TissueServer& operator=(const TissueServer&) = delete;

  std::uint16_t port() const;

  /// Blocks until `expected_clients` have connected and all of them have
  /// disconnected, then returns the finished engine. `on_record` sees each
  /// migration as it happens.
  std::unique_ptr<TissueEngine> run_session(TissueEngine::RecordCallback on_record = {},
                                            SessionStats* stats = nullptr);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Client side of the wire protocol.
class RemoteSink final : public EventSink {
 public:
  /// Throws TransportError if the connection is refused.
  RemoteSink(const std::string& host, std::uint16_t port);
  ~RemoteSink() override;

  void deliver(const Event& e) override;
  void close() override;

  /// Sends an arbitrary payload as one frame, bypassing the size check.
  void send_frame_unchecked(std::string_view payload);
  /// Sends raw bytes, e.g. half a frame.
  void send_raw(std::string_view bytes);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dca
