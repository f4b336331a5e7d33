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

#ifndef POLYSEG_ADAPTER_HPP_
#define POLYSEG_ADAPTER_HPP_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "polyseg/backends.hpp"
#include "polyseg/core.hpp"

namespace polyseg {

// Line-delimited text transport to an external model process. Requests and
// responses are single-line JSON objects; binary rasters travel as base64
// PNG (8-bit, 0/255 for masks).
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void send_line(const std::string& line) = 0;
  // Blocks for the next newline-terminated line (without the newline).
  // Throws BackendError on EOF or transport failure.
  virtual std::string recv_line() = 0;
};

// TCP connection to host:port.
std::unique_ptr<LineChannel> connect_tcp(const std::string& host, int port);

// Spawns `command` via /bin/sh and talks over its stdin/stdout.
std::unique_ptr<LineChannel> spawn_stdio(const std::string& command);

// JSON request/response client for the adapter protocol:
//   {"op":"detect","image":<png>,"input_size":680}
//       -> {"detections":[{"box":[x0,y0,x1,y1],"conf":f,"cls":0},...]}
//   {"op":"segment","image":<png>,"boxes":[[x0,y0,x1,y1],...]}
//       -> {"masks":[<png>,...]}
//   {"op":"video_init","frames":[<png>,...]} -> {"ok":true}
//   {"op":"video_prompt","frame":i,"obj":k,"box":[...]} -> {"ok":true}
//   {"op":"video_propagate"}
//       -> streamed {"frame":i,"obj":k,"mask":<png>} then {"done":true}
// Any {"error":<string>} reply raises BackendError with the diagnostic.
class AdapterClient {
 public:
  explicit AdapterClient(std::unique_ptr<LineChannel> channel);

  // addr forms: "host:port" (TCP) or "stdio:<command>" (spawned process).
  static std::unique_ptr<AdapterClient> from_address(const std::string& addr);

  std::vector<Detection> detect(const Frame& frame, int input_size);
  std::vector<BinaryMask> segment(const Frame& frame,
                                  const std::vector<BBox>& boxes);
  void video_init(const std::vector<Frame>& frames);
  void video_prompt(int frame_index, int object_id, const BBox& box);
  void video_propagate(const std::function<void(MaskEvent)>& sink);

 private:
  std::unique_ptr<LineChannel> channel_;
};

}  // namespace polyseg

#endif  // POLYSEG_ADAPTER_HPP_
