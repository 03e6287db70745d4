// Copyright 2026 The Compins Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COMPINS_EVENT_BUS_H_
#define COMPINS_EVENT_BUS_H_

#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace compins {

inline constexpr const char* kTopicSubmissions = "submissions.attrs";
inline constexpr const char* kTopicReleased = "slices.released";
inline constexpr const char* kTopicPreparedReady = "slices.prepared-ready";

struct BusEvent {
  std::uint64_t seq = 0;  // 1-based, contiguous per topic
  nlohmann::json payload;
};

// In-process journaled topic bus. Every published event is appended to
// events/<topic>.jsonl before delivery, delivery is at-least-once (failed
// handlers are retried, then the event is redelivered on the next drain),
// and consumers are expected to deduplicate. Journals are the replay source
// for bootstrapping.
class EventBus {
 public:
  using Handler = std::function<void(const BusEvent&)>;

  explicit EventBus(std::filesystem::path journal_dir);

  void Subscribe(const std::string& topic, Handler handler);

  // Journals the event, queues it for delivery, returns its sequence number.
  std::uint64_t Publish(const std::string& topic, nlohmann::json payload);

  // Delivers queued events (including any published while handling) until
  // the queue is empty. Throws after max_delivery_attempts consecutive
  // failures of one event.
  void Drain();

  // Journal contents in order; verifies the sequence is contiguous from 1
  // and throws JournalGap otherwise.
  std::vector<BusEvent> ReadJournal(const std::string& topic) const;

  // Redelivers the topic journal to current subscribers (bootstrapping).
  void Replay(const std::string& topic);

  // Deletes a topic's journal and resets its sequence counter. Bootstrap
  // uses this on derived topics before regenerating them.
  void ResetTopic(const std::string& topic);

  std::uint64_t NextSeq(const std::string& topic) const;

  const std::filesystem::path& journal_dir() const { return journal_dir_; }
  std::filesystem::path JournalFile(const std::string& topic) const;

  int max_delivery_attempts = 3;

 private:
  struct Queued {
    std::string topic;
    BusEvent event;
  };

  std::filesystem::path journal_dir_;
  std::map<std::string, std::vector<Handler>> handlers_;
  std::map<std::string, std::uint64_t> next_seq_;
  std::deque<Queued> queue_;
};

}  // namespace compins

#endif  // COMPINS_EVENT_BUS_H_
