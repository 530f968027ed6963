// Copyright 2026 The testmap Authors
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
//
// Built-in callee classifications and the TOML config reader. The built-in
// must-mock families reconstruct common JDK entry points for time, random,
// file, network, threading, process/environment and console access; every
// entry can be overridden from user config (later entries win).

#include "testmap/knowledge.hpp"

#include <fstream>
#include <sstream>

#include "testmap/errors.hpp"

namespace testmap {

const char* category_name(Category c) {
  switch (c) {
    case Category::FileSystem: return "FileSystem";
    case Category::Network: return "Network";
    case Category::Time: return "Time";
    case Category::Random: return "Random";
    case Category::Threading: return "Threading";
    case Category::ProcessEnv: return "ProcessEnv";
    case Category::Console: return "Console";
    case Category::OtherNonDeterminism: return "OtherNonDeterminism";
  }
  return "?";
}

const char* category_key(Category c) {
  switch (c) {
    case Category::FileSystem: return "file-system";
    case Category::Network: return "network";
    case Category::Time: return "time";
    case Category::Random: return "random";
    case Category::Threading: return "threading";
    case Category::ProcessEnv: return "process-env";
    case Category::Console: return "console";
    case Category::OtherNonDeterminism: return "other-non-determinism";
  }
  return "?";
}

std::optional<Category> category_from_name(const std::string& name) {
  static const std::pair<const char*, Category> table[] = {
      {"FileSystem", Category::FileSystem},
      {"Network", Category::Network},
      {"Time", Category::Time},
      {"Random", Category::Random},
      {"Threading", Category::Threading},
      {"ProcessEnv", Category::ProcessEnv},
      {"Console", Category::Console},
      {"OtherNonDeterminism", Category::OtherNonDeterminism},
  };
  for (const auto& [n, c] : table) {
    if (name == n) return c;
  }
  return std::nullopt;
}

const char* callee_kind_name(CalleeKind k) {
  switch (k) {
    case CalleeKind::MustMock: return "must-mock";
    case CalleeKind::Sink: return "sink";
    case CalleeKind::Neutral: return "neutral";
  }
  return "?";
}

namespace {

// Glob over '*' (any run) and '?' (any one char).
bool glob_match(const std::string& pattern, const std::string& text) {
  size_t p = 0, t = 0;
  size_t star = std::string::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

}  // namespace

bool MethodPattern::matches(const MethodId& id) const {
  if (descriptor != "*" && descriptor != id.descriptor) return false;
  if (!glob_match(name, id.name)) return false;
  return glob_match(owner, dotted_name(id.owner));
}

void KnowledgeBase::append(KnowledgeEntry entry) {
  entries_.push_back(std::move(entry));
}

std::string KnowledgeBase::fingerprint() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x1f;
    h *= 0x100000001b3ULL;
  };
  for (const auto& e : entries_) {
    mix(e.pattern.owner);
    mix(e.pattern.name);
    mix(e.pattern.descriptor);
    mix(callee_kind_name(e.classification.kind));
    if (e.classification.is_must_mock()) {
      mix(category_name(e.classification.category));
    }
  }
  mix(mock_final_classes_ ? "final:1" : "final:0");
  mix(mock_static_methods_ ? "static:1" : "static:0");
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

CalleeClassification classify_callee(const MethodId& callee,
                                     const KnowledgeBase& kb) {
  CalleeClassification result;  // Neutral when nothing matches
  for (const auto& e : kb.entries()) {
    if (e.pattern.matches(callee)) result = e.classification;
  }
  return result;
}

namespace {

void add(KnowledgeBase& kb, std::string owner, std::string name,
         std::string descriptor, CalleeKind kind,
         Category category = Category::OtherNonDeterminism) {
  KnowledgeEntry e;
  e.pattern = MethodPattern{std::move(owner), std::move(name),
                            std::move(descriptor)};
  e.classification = CalleeClassification{kind, category};
  e.provenance = "builtin";
  kb.append(std::move(e));
}

void add_builtins(KnowledgeBase& kb) {
  const auto mm = CalleeKind::MustMock;

  // Time: no-argument now() across java.time, wall-clock reads, and
  // system-zone clock factories. Overloads taking an explicit Clock stay
  // neutral: an injected clock restores determinism.
  for (const char* owner :
       {"java.time.LocalDateTime", "java.time.LocalDate", "java.time.LocalTime",
        "java.time.Instant", "java.time.ZonedDateTime",
        "java.time.OffsetDateTime", "java.time.OffsetTime", "java.time.Year",
        "java.time.YearMonth", "java.time.MonthDay"}) {
    std::string internal(owner);
    for (auto& c : internal) {
      if (c == '.') c = '/';
    }
    add(kb, owner, "now", "()L" + internal + ";", mm, Category::Time);
  }
  add(kb, "java.lang.System", "currentTimeMillis", "()J", mm, Category::Time);
  add(kb, "java.lang.System", "nanoTime", "()J", mm, Category::Time);
  add(kb, "java.util.Date", "<init>", "()V", mm, Category::Time);
  add(kb, "java.util.Calendar", "getInstance", "()Ljava/util/Calendar;", mm,
      Category::Time);
  add(kb, "java.time.Clock", "systemUTC", "()Ljava/time/Clock;", mm,
      Category::Time);
  add(kb, "java.time.Clock", "systemDefaultZone", "()Ljava/time/Clock;", mm,
      Category::Time);
  add(kb, "java.time.Clock", "system", "(Ljava/time/ZoneId;)Ljava/time/Clock;",
      mm, Category::Time);

  // Random: unseeded generator construction and direct random reads.
  add(kb, "java.util.Random", "<init>", "()V", mm, Category::Random);
  add(kb, "java.security.SecureRandom", "<init>", "*", mm, Category::Random);
  add(kb, "java.lang.Math", "random", "()D", mm, Category::Random);
  add(kb, "java.util.concurrent.ThreadLocalRandom", "current", "*", mm,
      Category::Random);
  add(kb, "java.util.UUID", "randomUUID", "()Ljava/util/UUID;", mm,
      Category::Random);

  // FileSystem: file/stream/path read-write entry points.
  add(kb, "java.nio.file.Files", "*", "*", mm, Category::FileSystem);
  add(kb, "java.io.FileInputStream", "<init>", "*", mm, Category::FileSystem);
  add(kb, "java.io.FileOutputStream", "<init>", "*", mm, Category::FileSystem);
  add(kb, "java.io.FileReader", "<init>", "*", mm, Category::FileSystem);
  add(kb, "java.io.FileWriter", "<init>", "*", mm, Category::FileSystem);
  add(kb, "java.io.RandomAccessFile", "<init>", "*", mm, Category::FileSystem);
  add(kb, "java.util.Scanner", "<init>", "(Ljava/io/File;)V", mm,
      Category::FileSystem);
  add(kb, "java.nio.channels.FileChannel", "open", "*", mm,
      Category::FileSystem);
  for (const char* name :
       {"createNewFile", "createTempFile", "delete", "deleteOnExit", "mkdir",
        "mkdirs", "renameTo", "setLastModified", "setReadOnly", "setWritable",
        "setReadable", "setExecutable", "exists", "length", "lastModified",
        "list", "listFiles", "listRoots", "canRead", "canWrite", "canExecute",
        "isDirectory", "isFile", "isHidden", "getFreeSpace", "getTotalSpace",
        "getUsableSpace"}) {
    add(kb, "java.io.File", name, "*", mm, Category::FileSystem);
  }

  // Network: socket, URL-connection and HTTP-client entry points.
  add(kb, "java.net.Socket", "<init>", "*", mm, Category::Network);
  add(kb, "java.net.ServerSocket", "<init>", "*", mm, Category::Network);
  add(kb, "java.net.DatagramSocket", "<init>", "*", mm, Category::Network);
  add(kb, "java.net.MulticastSocket", "<init>", "*", mm, Category::Network);
  for (const char* name : {"openConnection", "openStream", "getContent"}) {
    add(kb, "java.net.URL", name, "*", mm, Category::Network);
  }
  for (const char* name :
       {"connect", "getInputStream", "getOutputStream", "getContent"}) {
    add(kb, "java.net.URLConnection", name, "*", mm, Category::Network);
  }
  for (const char* name : {"connect", "getInputStream", "getOutputStream",
                           "getResponseCode", "getResponseMessage"}) {
    add(kb, "java.net.HttpURLConnection", name, "*", mm, Category::Network);
  }
  add(kb, "java.net.http.HttpClient", "send", "*", mm, Category::Network);
  add(kb, "java.net.http.HttpClient", "sendAsync", "*", mm, Category::Network);
  for (const char* name : {"getByName", "getAllByName", "getLocalHost"}) {
    add(kb, "java.net.InetAddress", name, "*", mm, Category::Network);
  }
  add(kb, "java.nio.channels.SocketChannel", "open", "*", mm,
      Category::Network);
  add(kb, "java.nio.channels.SocketChannel", "connect", "*", mm,
      Category::Network);
  add(kb, "java.nio.channels.ServerSocketChannel", "open", "*", mm,
      Category::Network);

  // Threading: thread lifecycle and executor submission.
  add(kb, "java.lang.Thread", "start", "()V", mm, Category::Threading);
  add(kb, "java.lang.Thread", "sleep", "*", mm, Category::Threading);
  add(kb, "java.lang.Thread", "join", "*", mm, Category::Threading);
  for (const char* name : {"submit", "invokeAll", "invokeAny", "execute"}) {
    add(kb, "java.util.concurrent.ExecutorService", name, "*", mm,
        Category::Threading);
  }
  add(kb, "java.util.concurrent.Executor", "execute", "*", mm,
      Category::Threading);
  add(kb, "java.util.concurrent.ScheduledExecutorService", "schedule*", "*",
      mm, Category::Threading);
  add(kb, "java.util.concurrent.CompletableFuture", "supplyAsync", "*", mm,
      Category::Threading);
  add(kb, "java.util.concurrent.CompletableFuture", "runAsync", "*", mm,
      Category::Threading);
  add(kb, "java.util.Timer", "schedule*", "*", mm, Category::Threading);
  for (const char* name : {"wait", "notify", "notifyAll"}) {
    add(kb, "java.lang.Object", name, "*", mm, Category::Threading);
  }

  // ProcessEnv: process execution and environment/property access.
  add(kb, "java.lang.Runtime", "exec", "*", mm, Category::ProcessEnv);
  add(kb, "java.lang.ProcessBuilder", "start", "*", mm, Category::ProcessEnv);
  add(kb, "java.lang.System", "getenv", "*", mm, Category::ProcessEnv);
  add(kb, "java.lang.System", "getProperty", "*", mm, Category::ProcessEnv);
  add(kb, "java.lang.System", "setProperty", "*", mm, Category::ProcessEnv);
  add(kb, "java.lang.System", "exit", "*", mm, Category::ProcessEnv);

  // Console: standard-stream reads.
  add(kb, "java.io.Console", "read*", "*", mm, Category::Console);

  // Logging frameworks are tolerated sinks: neither a mockability violation
  // nor an observation point.
  add(kb, "org.slf4j.*", "*", "*", CalleeKind::Sink);
  add(kb, "org.apache.logging.log4j.*", "*", "*", CalleeKind::Sink);
  add(kb, "org.apache.log4j.*", "*", "*", CalleeKind::Sink);
  add(kb, "java.util.logging.Logger", "*", "*", CalleeKind::Sink);
  add(kb, "org.apache.commons.logging.Log", "*", "*", CalleeKind::Sink);
  add(kb, "ch.qos.logback.*", "*", "*", CalleeKind::Sink);
}

// --- TOML subset reader -------------------------------------------------
//
// Supported: comments, blank lines, top-level `key = bool`, array-of-tables
// headers `[[entry]]`, and `key = "string"` entries. That is the entire
// config schema; anything else is a syntax error with a line number.

struct TomlLine {
  std::string key;
  std::string value;
  bool is_bool = false;
  bool bool_value = false;
};

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string parse_basic_string(const std::string& raw, int line_no) {
  if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"') {
    throw ConfigSyntax("expected a quoted string value", line_no);
  }
  std::string out;
  for (size_t i = 1; i + 1 < raw.size(); ++i) {
    char c = raw[i];
    if (c == '\\') {
      if (i + 2 >= raw.size()) throw ConfigSyntax("dangling escape", line_no);
      char esc = raw[++i];
      switch (esc) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default:
          throw ConfigSyntax("unsupported escape sequence", line_no);
      }
    } else if (c == '"') {
      throw ConfigSyntax("unexpected quote inside string", line_no);
    } else {
      out += c;
    }
  }
  return out;
}

TomlLine parse_key_value(const std::string& line, int line_no) {
  size_t eq = line.find('=');
  if (eq == std::string::npos) {
    throw ConfigSyntax("expected key = value", line_no);
  }
  TomlLine out;
  out.key = trim(line.substr(0, eq));
  std::string value = trim(line.substr(eq + 1));
  if (out.key.empty() || value.empty()) {
    throw ConfigSyntax("expected key = value", line_no);
  }
  if (value == "true" || value == "false") {
    out.is_bool = true;
    out.bool_value = value == "true";
  } else {
    out.value = parse_basic_string(value, line_no);
  }
  return out;
}

struct PendingEntry {
  std::string owner, name, descriptor = "*";
  std::string classification, category;
  int line = 0;                // the [[entry]] header
  int classification_line = 0;
  int category_line = 0;
  bool has_classification = false;
};

void flush_entry(KnowledgeBase& kb, const PendingEntry& e,
                 const std::string& path) {
  if (e.owner.empty() || e.name.empty()) {
    throw ConfigSemantic("entry needs non-empty owner and name patterns",
                         e.line);
  }
  if (!e.has_classification) {
    throw ConfigSemantic("entry needs a classification", e.line);
  }
  CalleeClassification cls;
  if (e.classification == "must-mock") {
    cls.kind = CalleeKind::MustMock;
    auto cat = category_from_name(e.category);
    if (!cat) {
      throw ConfigSemantic("unknown category \"" + e.category + "\"",
                           e.category_line ? e.category_line : e.line);
    }
    cls.category = *cat;
  } else if (e.classification == "sink") {
    cls.kind = CalleeKind::Sink;
  } else if (e.classification == "neutral") {
    cls.kind = CalleeKind::Neutral;
  } else {
    throw ConfigSemantic("unknown classification \"" + e.classification + "\"",
                         e.classification_line ? e.classification_line
                                               : e.line);
  }
  KnowledgeEntry entry;
  entry.pattern = MethodPattern{e.owner, e.name, e.descriptor};
  entry.classification = cls;
  entry.provenance = path + ":" + std::to_string(e.line);
  kb.append(std::move(entry));
}

void load_config(KnowledgeBase& kb, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read knowledge base config: " + path);

  std::string line;
  int line_no = 0;
  bool in_entry = false;
  PendingEntry pending;

  while (std::getline(in, line)) {
    ++line_no;
    // Strip comments outside strings.
    bool in_string = false;
    for (size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) {
        in_string = !in_string;
      } else if (line[i] == '#' && !in_string) {
        line = line.substr(0, i);
        break;
      }
    }
    std::string t = trim(line);
    if (t.empty()) continue;

    if (t == "[[entry]]") {
      if (in_entry) flush_entry(kb, pending, path);
      pending = PendingEntry{};
      pending.line = line_no;
      in_entry = true;
      continue;
    }
    if (t.front() == '[') {
      throw ConfigSyntax("unsupported section header " + t, line_no);
    }

    TomlLine kv = parse_key_value(t, line_no);
    if (!in_entry) {
      if (kv.key == "mock_final_classes" && kv.is_bool) {
        kb.set_mock_final_classes(kv.bool_value);
      } else if (kv.key == "mock_static_methods" && kv.is_bool) {
        kb.set_mock_static_methods(kv.bool_value);
      } else if (kv.is_bool) {
        throw ConfigSemantic("unknown option \"" + kv.key + "\"", line_no);
      } else {
        throw ConfigSemantic("unexpected top-level key \"" + kv.key + "\"",
                             line_no);
      }
      continue;
    }
    if (kv.is_bool) {
      throw ConfigSemantic("entry key \"" + kv.key + "\" needs a string value",
                           line_no);
    }
    if (kv.key == "owner") {
      pending.owner = kv.value;
    } else if (kv.key == "name") {
      pending.name = kv.value;
    } else if (kv.key == "descriptor") {
      pending.descriptor = kv.value;
    } else if (kv.key == "classification") {
      pending.classification = kv.value;
      pending.classification_line = line_no;
      pending.has_classification = true;
    } else if (kv.key == "category") {
      pending.category = kv.value;
      pending.category_line = line_no;
    } else {
      throw ConfigSemantic("unknown entry key \"" + kv.key + "\"", line_no);
    }
  }
  if (in_entry) flush_entry(kb, pending, path);
}

}  // namespace

KnowledgeBase builtin_knowledge_base() {
  KnowledgeBase kb;
  add_builtins(kb);
  return kb;
}

KnowledgeBase load_knowledge_base(const std::optional<std::string>& config_path) {
  KnowledgeBase kb = builtin_knowledge_base();
  if (config_path) load_config(kb, *config_path);
  return kb;
}

}  // namespace testmap
