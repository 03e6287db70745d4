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

#include "compins/event_bus.h"

#include <fstream>

#include "compins/errors.h"

namespace compins {

using nlohmann::json;

EventBus::EventBus(std::filesystem::path journal_dir) : journal_dir_(std::move(journal_dir)) {
  std::error_code ec;
  std::filesystem::create_directories(journal_dir_, ec);
  // Pick up sequence counters from any journals already on disk so a
  // process restart keeps the numbering contiguous.
  for (const auto& entry : std::filesystem::directory_iterator(journal_dir_)) {
    if (entry.path().extension() != ".jsonl") continue;
    const std::string topic = entry.path().stem().string();
    std::ifstream in(entry.path());
    std::string line;
    std::uint64_t last = 0;
    std::uint64_t count = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      last = json::parse(line).at("seq").get<std::uint64_t>();
      ++count;
    }
    (void)count;
    next_seq_[topic] = last + 1;
  }
}

std::filesystem::path EventBus::JournalFile(const std::string& topic) const {
  return journal_dir_ / (topic + ".jsonl");
}

void EventBus::Subscribe(const std::string& topic, Handler handler) {
  handlers_[topic].push_back(std::move(handler));
}

std::uint64_t EventBus::NextSeq(const std::string& topic) const {
  const auto it = next_seq_.find(topic);
  return it == next_seq_.end() ? 1 : it->second;
}

std::uint64_t EventBus::Publish(const std::string& topic, json payload) {
  auto& next = next_seq_.try_emplace(topic, 1).first->second;
  BusEvent event{next, std::move(payload)};
  ++next;

  std::ofstream out(JournalFile(topic), std::ios::app);
  if (!out) throw IoError("cannot append to journal for topic " + topic);
  out << json{{"seq", event.seq}, {"payload", event.payload}}.dump() << '\n';
  if (!out) throw IoError("short write to journal for topic " + topic);

  queue_.push_back(Queued{topic, std::move(event)});
  return queue_.back().event.seq;
}

void EventBus::Drain() {
  while (!queue_.empty()) {
    Queued item = std::move(queue_.front());
    queue_.pop_front();
    const auto it = handlers_.find(item.topic);
    if (it == handlers_.end()) continue;
    for (const Handler& handler : it->second) {
      int attempts = 0;
      for (;;) {
        try {
          handler(item.event);
          break;
        } catch (const std::exception& e) {
          if (++attempts >= max_delivery_attempts) {
            throw Error("event " + item.topic + "#" + std::to_string(item.event.seq) +
                        " failed after " + std::to_string(attempts) + " attempts: " + e.what());
          }
        }
      }
    }
  }
}

std::vector<BusEvent> EventBus::ReadJournal(const std::string& topic) const {
  std::vector<BusEvent> events;
  std::ifstream in(JournalFile(topic));
  if (!in) return events;
  std::string line;
  std::uint64_t expected = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    BusEvent event{j.at("seq").get<std::uint64_t>(), j.at("payload")};
    if (event.seq != expected) {
      throw JournalGap("journal " + topic + " jumps from seq " + std::to_string(expected - 1) +
                       " to " + std::to_string(event.seq));
    }
    ++expected;
    events.push_back(std::move(event));
  }
  return events;
}

void EventBus::Replay(const std::string& topic) {
  for (const BusEvent& event : ReadJournal(topic)) {
    queue_.push_back(Queued{topic, event});
  }
  Drain();
}

void EventBus::ResetTopic(const std::string& topic) {
  std::error_code ec;
  std::filesystem::remove(JournalFile(topic), ec);
  next_seq_[topic] = 1;
}

}  // namespace compins
