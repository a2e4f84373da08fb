/* Copyright 2026 The QGE Lab Authors. All Rights Reserved.

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
#include "qge/config.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <utility>

#include "qge/common.h"

namespace qge::config {
namespace {

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void Fail(const std::string& source, int line, const std::string& what) {
  throw Error(ErrorKind::kConfig, source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

const std::string* ConfigFile::Find(const std::string& section,
                                    const std::string& key) const {
  for (const auto& e : entries) {
    if (e.section == section && e.key == key) return &e.value;
  }
  return nullptr;
}

ConfigFile Parse(std::istream& in, const std::string& source) {
  ConfigFile file;
  file.source = source;
  std::string section;
  std::set<std::pair<std::string, std::string>> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (line == 1 && raw.starts_with("\xEF\xBB\xBF")) raw.erase(0, 3);
    const auto hash = raw.find('#');
    const std::string text = Trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') Fail(source, line, "unterminated section header");
      section = Trim(text.substr(1, text.size() - 2));
      if (std::none_of(std::begin(kSections), std::end(kSections),
                       [&](const char* s) { return section == s; })) {
        Fail(source, line, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) Fail(source, line, "expected key = value");
    if (section.empty()) Fail(source, line, "key outside of a section");
    Entry e{section, Trim(text.substr(0, eq)), Trim(text.substr(eq + 1)), line};
    if (e.key.empty()) Fail(source, line, "empty key");
    if (!seen.emplace(e.section, e.key).second) {
      Fail(source, line, "duplicate key " + e.section + "." + e.key);
    }
    file.entries.push_back(std::move(e));
  }
  return file;
}

ConfigFile Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open config file " + path);
  return Parse(in, path);
}

}  // namespace qge::config
