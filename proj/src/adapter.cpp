/* Copyright 2026 The Polyseg Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "polyseg/adapter.hpp"

#include <netdb.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstring>
#include <utility>

#include <json.hpp>

#include "polyseg/encoding.hpp"
#include "polyseg/png_io.hpp"

namespace polyseg {
namespace {

using nlohmann::json;

class FdChannel : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd) : read_fd_(read_fd),
                                         write_fd_(write_fd) {}

  ~FdChannel() override {
    if (read_fd_ >= 0) ::close(read_fd_);
    if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
  }

  void send_line(const std::string& line) override {
    std::string payload = line;
    payload.push_back('\n');
    std::size_t off = 0;
    while (off < payload.size()) {
      const ssize_t n =
          ::write(write_fd_, payload.data() + off, payload.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw BackendError(std::string("adapter write failed: ") +
                           std::strerror(errno));
      }
      off += static_cast<std::size_t>(n);
    }
  }

  std::string recv_line() override {
    std::string line;
    while (true) {
      const auto nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return line;
      }
      char chunk[4096];
      const ssize_t n = ::read(read_fd_, chunk, sizeof(chunk));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw BackendError(std::string("adapter read failed: ") +
                           std::strerror(errno));
      }
      if (n == 0) {
        throw BackendError("adapter closed the connection");
      }
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 protected:
  int read_fd_ = -1;
  int write_fd_ = -1;

 private:
  std::string buffer_;
};

class ProcessChannel : public FdChannel {
 public:
  ProcessChannel(int read_fd, int write_fd, pid_t pid)
      : FdChannel(read_fd, write_fd), pid_(pid) {}

  ~ProcessChannel() override {
    // Closing stdin lets a well-behaved adapter exit on its own.
    if (write_fd_ >= 0) {
      ::close(write_fd_);
      write_fd_ = -1;
    }
    if (pid_ > 0) {
      int status = 0;
      ::waitpid(pid_, &status, 0);
    }
  }

 private:
  pid_t pid_ = -1;
};

}  // namespace

std::unique_ptr<LineChannel> connect_tcp(const std::string& host, int port) {
  addrinfo hints;
  std::memset(&hints, 0, sizeof(hints));
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* result = nullptr;
  const std::string service = std::to_string(port);
  const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &result);
  if (rc != 0) {
    throw BackendError("adapter resolve failed for " + host + ":" + service +
                       ": " + gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* ai = result; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(result);
  if (fd < 0) {
    throw BackendError("adapter unreachable at " + host + ":" + service);
  }
  return std::make_unique<FdChannel>(fd, fd);
}

std::unique_ptr<LineChannel> spawn_stdio(const std::string& command) {
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
    throw BackendError("adapter spawn failed: pipe()");
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    throw BackendError("adapter spawn failed: fork()");
  }
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
    _exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  return std::make_unique<ProcessChannel>(from_child[0], to_child[1], pid);
}

AdapterClient::AdapterClient(std::unique_ptr<LineChannel> channel)
    : channel_(std::move(channel)) {}

std::unique_ptr<AdapterClient> AdapterClient::from_address(
    const std::string& addr) {
  if (addr.rfind("stdio:", 0) == 0) {
    return std::make_unique<AdapterClient>(spawn_stdio(addr.substr(6)));
  }
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos || colon == 0 ||
      colon + 1 == addr.size()) {
    throw ConfigError("adapter address must be host:port or stdio:<command>, "
                      "got '" + addr + "'");
  }
  int port = 0;
  try {
    port = std::stoi(addr.substr(colon + 1));
  } catch (const std::exception&) {
    throw ConfigError("bad adapter port in '" + addr + "'");
  }
  return std::make_unique<AdapterClient>(connect_tcp(addr.substr(0, colon),
                                                     port));
}

namespace {

json parse_reply(const std::string& line) {
  json reply;
  try {
    reply = json::parse(line);
  } catch (const json::exception& e) {
    throw BackendError(std::string("adapter protocol violation: ") + e.what());
  }
  if (!reply.is_object()) {
    throw BackendError("adapter protocol violation: reply is not an object");
  }
  if (reply.contains("error")) {
    throw BackendError("adapter error: " +
                       reply["error"].get<std::string>());
  }
  return reply;
}

json box_to_json(const BBox& box) {
  return json::array({box.x_min, box.y_min, box.x_max, box.y_max});
}

BBox box_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw BackendError("adapter protocol violation: box must be "
                       "[x0,y0,x1,y1]");
  }
  return BBox{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(),
              j[3].get<int>()};
}

std::string frame_to_png_b64(const Frame& frame) {
  RgbImage image;
  image.height = frame.height;
  image.width = frame.width;
  image.pixels = frame.rgb;
  return base64_encode(encode_rgb_png(image));
}

}  // namespace

std::vector<Detection> AdapterClient::detect(const Frame& frame,
                                             int input_size) {
  json request{{"op", "detect"},
               {"image", frame_to_png_b64(frame)},
               {"input_size", input_size}};
  channel_->send_line(request.dump());
  const json reply = parse_reply(channel_->recv_line());
  if (!reply.contains("detections") || !reply["detections"].is_array()) {
    throw BackendError("adapter protocol violation: missing detections");
  }
  std::vector<Detection> out;
  for (const auto& d : reply["detections"]) {
    Detection det;
    det.box = box_from_json(d.at("box"));
    det.confidence = d.at("conf").get<double>();
    det.class_id = d.value("cls", 0);
    if (!det.box.valid() || det.confidence < 0.0 || det.confidence > 1.0) {
      throw BackendError("adapter protocol violation: invalid detection");
    }
    out.push_back(det);
  }
  return out;
}

std::vector<BinaryMask> AdapterClient::segment(const Frame& frame,
                                               const std::vector<BBox>& boxes) {
  json jboxes = json::array();
  for (const BBox& b : boxes) jboxes.push_back(box_to_json(b));
  json request{{"op", "segment"},
               {"image", frame_to_png_b64(frame)},
               {"boxes", jboxes}};
  channel_->send_line(request.dump());
  const json reply = parse_reply(channel_->recv_line());
  if (!reply.contains("masks") || !reply["masks"].is_array()) {
    throw BackendError("adapter protocol violation: missing masks");
  }
  std::vector<BinaryMask> out;
  for (const auto& m : reply["masks"]) {
    const auto bytes = base64_decode(m.get<std::string>());
    out.push_back(mask_from_gray(decode_gray_png(bytes.data(), bytes.size())));
  }
  return out;
}

void AdapterClient::video_init(const std::vector<Frame>& frames) {
  json jframes = json::array();
  for (const Frame& f : frames) jframes.push_back(frame_to_png_b64(f));
  json request{{"op", "video_init"}, {"frames", jframes}};
  channel_->send_line(request.dump());
  parse_reply(channel_->recv_line());
}

void AdapterClient::video_prompt(int frame_index, int object_id,
                                 const BBox& box) {
  json request{{"op", "video_prompt"},
               {"frame", frame_index},
               {"obj", object_id},
               {"box", box_to_json(box)}};
  channel_->send_line(request.dump());
  parse_reply(channel_->recv_line());
}

void AdapterClient::video_propagate(
    const std::function<void(MaskEvent)>& sink) {
  json request{{"op", "video_propagate"}};
  channel_->send_line(request.dump());
  while (true) {
    const json record = parse_reply(channel_->recv_line());
    if (record.value("done", false)) break;
    if (!record.contains("frame") || !record.contains("obj") ||
        !record.contains("mask")) {
      throw BackendError("adapter protocol violation: bad propagate record");
    }
    MaskEvent event;
    event.frame_index = record["frame"].get<int>();
    event.object_id = record["obj"].get<int>();
    const auto bytes = base64_decode(record["mask"].get<std::string>());
    event.mask = mask_from_gray(decode_gray_png(bytes.data(), bytes.size()));
    sink(std::move(event));
  }
}

}  // namespace polyseg
