// Copyright 2026 qnoise Contributors
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

#include <cctype>
#include <charconv>
#include <string>

#include "qnoise/errors.h"
#include "qnoise/io.h"

namespace qnoise {

namespace {

// Recursive-descent reader for the TOML dialect used by configuration
// files: tables, arrays of tables, dotted keys, strings, numbers,
// booleans, (nested, possibly multiline) arrays, and # comments.
class TomlReader {
  public:
    explicit TomlReader(const std::string &text) : text_(text) {}

    Json parse() {
        Json root = Json::object();
        Json *current = &root;
        skip_space(true);
        while (!at_end()) {
            if (peek() == '[') {
                current = parse_table_header(root);
            } else {
                parse_keyval(*current);
            }
            skip_space(true);
        }
        return root;
    }

  private:
    const std::string &text_;
    size_t pos_ = 0;
    size_t line_ = 1;

    [[noreturn]] void fail(const std::string &message) const {
        throw ConfigError("toml parse error (line " + std::to_string(line_) + "): " + message);
    }

    bool at_end() const {
        return pos_ >= text_.size();
    }
    char peek() const {
        return text_[pos_];
    }
    char take() {
        char c = text_[pos_++];
        if (c == '\n') {
            line_++;
        }
        return c;
    }

    void skip_space(bool include_newlines) {
        while (!at_end()) {
            char c = peek();
            if (c == '#') {
                while (!at_end() && peek() != '\n') {
                    take();
                }
            } else if (c == ' ' || c == '\t' || c == '\r' || (include_newlines && c == '\n')) {
                take();
            } else {
                return;
            }
        }
    }

    std::string parse_bare_key() {
        std::string key;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-')) {
            key += take();
        }
        if (key.empty()) {
            fail("expected a key");
        }
        return key;
    }

    std::vector<std::string> parse_key_path() {
        std::vector<std::string> path;
        path.push_back(parse_bare_key());
        while (!at_end() && peek() == '.') {
            take();
            path.push_back(parse_bare_key());
        }
        return path;
    }

    Json *navigate(Json &root, const std::vector<std::string> &path, bool array_of_tables) {
        Json *node = &root;
        for (size_t i = 0; i < path.size(); i++) {
            bool last = i + 1 == path.size();
            const std::string &key = path[i];
            if (last && array_of_tables) {
                if (!node->contains(key)) {
                    (*node)[key] = Json::array();
                }
                if (!(*node)[key].is_array()) {
                    fail("key \"" + key + "\" is not an array of tables");
                }
                (*node)[key].push_back(Json::object());
                node = &(*node)[key].back();
            } else {
                if (!node->contains(key)) {
                    (*node)[key] = Json::object();
                }
                Json &child = (*node)[key];
                if (child.is_array() && !child.empty()) {
                    node = &child.back();
                } else if (child.is_object()) {
                    node = &child;
                } else {
                    fail("key \"" + key + "\" is not a table");
                }
            }
        }
        return node;
    }

    Json *parse_table_header(Json &root) {
        take();  // '['
        bool array_of_tables = !at_end() && peek() == '[';
        if (array_of_tables) {
            take();
        }
        skip_space(false);
        auto path = parse_key_path();
        skip_space(false);
        if (at_end() || take() != ']') {
            fail("expected ']' after table name");
        }
        if (array_of_tables && (at_end() || take() != ']')) {
            fail("expected ']]' after array-of-tables name");
        }
        return navigate(root, path, array_of_tables);
    }

    void parse_keyval(Json &table) {
        auto path = parse_key_path();
        skip_space(false);
        if (at_end() || take() != '=') {
            fail("expected '=' after key");
        }
        skip_space(false);
        Json value = parse_value();

        Json *node = &table;
        for (size_t i = 0; i + 1 < path.size(); i++) {
            if (!node->contains(path[i])) {
                (*node)[path[i]] = Json::object();
            }
            node = &(*node)[path[i]];
        }
        if (node->contains(path.back())) {
            fail("duplicate key \"" + path.back() + "\"");
        }
        (*node)[path.back()] = std::move(value);
    }

    Json parse_value() {
        if (at_end()) {
            fail("expected a value");
        }
        char c = peek();
        if (c == '"') {
            return parse_string();
        }
        if (c == '[') {
            return parse_array();
        }
        return parse_scalar();
    }

    Json parse_string() {
        take();  // opening quote
        std::string out;
        while (true) {
            if (at_end()) {
                fail("unterminated string");
            }
            char c = take();
            if (c == '"') {
                break;
            }
            if (c == '\\') {
                if (at_end()) {
                    fail("unterminated escape");
                }
                char e = take();
                switch (e) {
                    case 'n':
                        out += '\n';
                        break;
                    case 't':
                        out += '\t';
                        break;
                    case '"':
                        out += '"';
                        break;
                    case '\\':
                        out += '\\';
                        break;
                    default:
                        fail(std::string("unsupported escape \\") + e);
                }
            } else {
                out += c;
            }
        }
        return Json(out);
    }

    Json parse_array() {
        take();  // '['
        Json out = Json::array();
        skip_space(true);
        if (!at_end() && peek() == ']') {
            take();
            return out;
        }
        while (true) {
            out.push_back(parse_value());
            skip_space(true);
            if (at_end()) {
                fail("unterminated array");
            }
            char c = take();
            if (c == ']') {
                break;
            }
            if (c != ',') {
                fail("expected ',' or ']' in array");
            }
            skip_space(true);
            if (!at_end() && peek() == ']') {  // trailing comma
                take();
                break;
            }
        }
        return out;
    }

    Json parse_scalar() {
        std::string token;
        while (!at_end()) {
            char c = peek();
            if (c == ',' || c == ']' || c == '\n' || c == '#' || c == ' ' || c == '\t' || c == '\r') {
                break;
            }
            token += take();
        }
        if (token == "true") {
            return Json(true);
        }
        if (token == "false") {
            return Json(false);
        }
        {
            int64_t int_value = 0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), int_value);
            if (ec == std::errc() && ptr == token.data() + token.size()) {
                return Json(int_value);
            }
        }
        double double_value = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), double_value);
        if (ec == std::errc() && ptr == token.data() + token.size()) {
            return Json(double_value);
        }
        fail("cannot interpret value \"" + token + "\"");
    }
};

}  // namespace

Json toml_lite_parse(const std::string &text) {
    return TomlReader(text).parse();
}

}  // namespace qnoise
