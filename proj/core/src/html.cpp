#include "serpgauge/html.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>

#include "serpgauge/errors.hpp"
#include "serpgauge/unicode.hpp"

namespace serpgauge::html {

namespace {

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_void_element(const std::string& tag) {
    static const std::array<const char*, 14> kVoid = {"area",  "base", "br",     "col",  "embed",
                                                      "hr",    "img",  "input",  "link", "meta",
                                                      "param", "source", "track", "wbr"};
    return std::find(kVoid.begin(), kVoid.end(), tag) != kVoid.end();
}

bool is_raw_text_element(const std::string& tag) { return tag == "script" || tag == "style"; }

bool is_rcdata_element(const std::string& tag) { return tag == "title" || tag == "textarea"; }

struct Parser {
    std::string_view input;
    std::size_t pos = 0;
    std::vector<Node> nodes;
    std::vector<int> open;  // stack of open element indices

    bool eof() const { return pos >= input.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos + ahead < input.size() ? input[pos + ahead] : '\0';
    }
    bool starts_with(std::string_view s) const { return input.substr(pos, s.size()) == s; }

    int add_node(Node node) {
        node.parent = open.back();
        nodes[static_cast<std::size_t>(open.back())].children.push_back(
            static_cast<int>(nodes.size()));
        nodes.push_back(std::move(node));
        return static_cast<int>(nodes.size()) - 1;
    }

    void add_text(std::string_view raw, bool decode) {
        if (raw.empty()) return;
        Node node;
        node.kind = Node::Kind::text;
        node.text = decode ? decode_entities(raw) : std::string(raw);
        add_node(std::move(node));
    }

    void skip_until(std::string_view end) {
        const auto at = input.find(end, pos);
        pos = at == std::string_view::npos ? input.size() : at + end.size();
    }

    std::string read_tag_name() {
        std::string name;
        while (!eof()) {
            const char c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':') {
                name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
                ++pos;
            } else {
                break;
            }
        }
        return name;
    }

    void read_attributes(Node& node, bool& self_closing) {
        self_closing = false;
        while (!eof()) {
            while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos;
            if (eof()) return;
            if (peek() == '>') {
                ++pos;
                return;
            }
            if (peek() == '/') {
                ++pos;
                if (peek() == '>') {
                    ++pos;
                    self_closing = true;
                    return;
                }
                continue;
            }
            Attribute attribute;
            while (!eof()) {
                const char c = peek();
                if (c == '=' || c == '>' || c == '/' ||
                    std::isspace(static_cast<unsigned char>(c)))
                    break;
                attribute.name.push_back(
                    static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
                ++pos;
            }
            while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos;
            if (peek() == '=') {
                ++pos;
                while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos;
                std::string raw;
                if (peek() == '"' || peek() == '\'') {
                    const char quote = peek();
                    ++pos;
                    while (!eof() && peek() != quote) {
                        raw.push_back(peek());
                        ++pos;
                    }
                    if (!eof()) ++pos;
                } else {
                    while (!eof() && peek() != '>' &&
                           !std::isspace(static_cast<unsigned char>(peek()))) {
                        raw.push_back(peek());
                        ++pos;
                    }
                }
                attribute.value = decode_entities(raw);
            }
            if (!attribute.name.empty()) node.attributes.push_back(std::move(attribute));
        }
    }

    // Content of script/style/title/textarea runs to the matching close tag.
    void read_special_content(const std::string& tag, bool decode) {
        const std::string close = "</" + tag;
        const auto matches_close = [&](std::size_t at) {
            if (at + close.size() > input.size()) return false;
            for (std::size_t k = 0; k < close.size(); ++k) {
                if (std::tolower(static_cast<unsigned char>(input[at + k])) != close[k])
                    return false;
            }
            const char after =
                at + close.size() < input.size() ? input[at + close.size()] : '>';
            return after == '>' || after == '/' ||
                   std::isspace(static_cast<unsigned char>(after));
        };
        std::size_t scan = pos;
        while (scan < input.size() && !matches_close(scan)) ++scan;
        add_text(input.substr(pos, scan - pos), decode);
        pos = scan;
        if (pos < input.size()) {
            skip_until(">");
        }
    }

    void close_tag(const std::string& tag) {
        for (auto it = open.rbegin(); it != open.rend(); ++it) {
            if (nodes[static_cast<std::size_t>(*it)].tag == tag) {
                open.erase(std::prev(it.base()), open.end());
                return;
            }
        }
        // Stray close tag: ignored.
    }

    void run() {
        Node root;
        root.tag = "#root";
        nodes.push_back(std::move(root));
        open.push_back(0);

        while (!eof()) {
            if (peek() != '<') {
                const auto next = input.find('<', pos);
                const auto end = next == std::string_view::npos ? input.size() : next;
                add_text(input.substr(pos, end - pos), true);
                pos = end;
                continue;
            }
            if (starts_with("<!--")) {
                pos += 4;
                skip_until("-->");
                continue;
            }
            if (starts_with("<![CDATA[")) {
                pos += 9;
                skip_until("]]>");
                continue;
            }
            if (starts_with("<!") || starts_with("<?")) {
                skip_until(">");
                continue;
            }
            if (peek(1) == '/') {
                pos += 2;
                const auto tag = read_tag_name();
                skip_until(">");
                if (!tag.empty()) close_tag(tag);
                continue;
            }
            if (!std::isalpha(static_cast<unsigned char>(peek(1)))) {
                add_text(input.substr(pos, 1), false);
                ++pos;
                continue;
            }
            ++pos;
            Node element;
            element.tag = read_tag_name();
            bool self_closing = false;
            read_attributes(element, self_closing);
            const std::string tag = element.tag;
            const int index = add_node(std::move(element));
            if (self_closing || is_void_element(tag)) continue;
            if (is_raw_text_element(tag) || is_rcdata_element(tag)) {
                open.push_back(index);
                read_special_content(tag, is_rcdata_element(tag));
                open.pop_back();
                continue;
            }
            open.push_back(index);
        }
    }
};

struct Compound {
    std::string tag;
    std::string id;
    std::vector<std::string> classes;
    std::vector<std::pair<std::string, std::string>> attrs;  // empty value = presence check
    std::vector<bool> attr_has_value;
};

struct Selector {
    std::vector<Compound> chain;
};

Selector parse_selector(std::string_view text) {
    Selector selector;
    std::size_t i = 0;
    const auto n = text.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= n) break;
        Compound compound;
        while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) {
            const char c = text[i];
            if (c == '#' || c == '.') {
                ++i;
                std::string name;
                while (i < n && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                 text[i] == '-' || text[i] == '_')) {
                    name.push_back(text[i]);
                    ++i;
                }
                if (c == '#')
                    compound.id = name;
                else
                    compound.classes.push_back(name);
            } else if (c == '[') {
                ++i;
                std::string name, value;
                bool has_value = false;
                while (i < n && text[i] != ']' && text[i] != '=') {
                    name.push_back(text[i]);
                    ++i;
                }
                if (i < n && text[i] == '=') {
                    ++i;
                    has_value = true;
                    const char quote = (i < n && (text[i] == '"' || text[i] == '\'')) ? text[i] : 0;
                    if (quote) ++i;
                    while (i < n && text[i] != ']' && (quote == 0 || text[i] != quote)) {
                        value.push_back(text[i]);
                        ++i;
                    }
                    if (quote && i < n && text[i] == quote) ++i;
                }
                if (i < n && text[i] == ']') ++i;
                compound.attrs.emplace_back(to_lower_ascii(name), value);
                compound.attr_has_value.push_back(has_value);
            } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
                       c == '*') {
                compound.tag.push_back(
                    static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
                ++i;
            } else {
                throw InputError("unsupported selector syntax near '" + std::string(1, c) + "'");
            }
        }
        if (compound.tag == "*") compound.tag.clear();
        selector.chain.push_back(std::move(compound));
    }
    if (selector.chain.empty()) throw InputError("empty selector");
    return selector;
}

bool has_class(const Node& node, const std::string& cls) {
    const auto* attr = node.attr("class");
    if (!attr) return false;
    std::size_t i = 0;
    while (i < attr->size()) {
        while (i < attr->size() && std::isspace(static_cast<unsigned char>((*attr)[i]))) ++i;
        std::size_t j = i;
        while (j < attr->size() && !std::isspace(static_cast<unsigned char>((*attr)[j]))) ++j;
        if (attr->substr(i, j - i) == cls) return true;
        i = j;
    }
    return false;
}

bool matches_compound(const Node& node, const Compound& compound) {
    if (node.kind != Node::Kind::element) return false;
    if (!compound.tag.empty() && node.tag != compound.tag) return false;
    if (!compound.id.empty()) {
        const auto* id = node.attr("id");
        if (!id || *id != compound.id) return false;
    }
    for (const auto& cls : compound.classes)
        if (!has_class(node, cls)) return false;
    for (std::size_t k = 0; k < compound.attrs.size(); ++k) {
        const auto* value = node.attr(compound.attrs[k].first);
        if (!value) return false;
        if (compound.attr_has_value[k] && *value != compound.attrs[k].second) return false;
    }
    return true;
}

}  // namespace

const std::string* Node::attr(std::string_view name) const {
    for (const auto& attribute : attributes)
        if (attribute.name == name) return &attribute.value;
    return nullptr;
}

std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c != '&') {
            out.push_back(c);
            ++i;
            continue;
        }
        const auto semi = text.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12) {
            out.push_back(c);
            ++i;
            continue;
        }
        const auto name = text.substr(i + 1, semi - i - 1);
        if (name == "amp") {
            out.push_back('&');
        } else if (name == "lt") {
            out.push_back('<');
        } else if (name == "gt") {
            out.push_back('>');
        } else if (name == "quot") {
            out.push_back('"');
        } else if (name == "apos") {
            out.push_back('\'');
        } else if (name == "nbsp") {
            unicode::append_utf8(out, 0xA0);
        } else if (!name.empty() && name[0] == '#') {
            char32_t cp = 0;
            bool ok = name.size() > 1;
            if (name.size() > 2 && (name[1] == 'x' || name[1] == 'X')) {
                for (std::size_t k = 2; k < name.size() && ok; ++k) {
                    const char h = name[k];
                    if (!std::isxdigit(static_cast<unsigned char>(h))) ok = false;
                    cp = cp * 16 + static_cast<char32_t>(
                                       std::isdigit(static_cast<unsigned char>(h))
                                           ? h - '0'
                                           : std::tolower(static_cast<unsigned char>(h)) - 'a' + 10);
                }
            } else {
                for (std::size_t k = 1; k < name.size() && ok; ++k) {
                    if (!std::isdigit(static_cast<unsigned char>(name[k]))) ok = false;
                    cp = cp * 10 + static_cast<char32_t>(name[k] - '0');
                }
            }
            if (ok && cp > 0 && cp <= 0x10FFFF) {
                unicode::append_utf8(out, cp);
            } else {
                out.append(text.substr(i, semi - i + 1));
            }
        } else {
            out.push_back(c);
            ++i;
            continue;
        }
        i = semi + 1;
    }
    return out;
}

Document Document::parse(std::string_view html_text) {
    Parser parser;
    parser.input = html_text;
    parser.run();
    Document document;
    document.nodes_ = std::move(parser.nodes);
    return document;
}

std::string Document::text_beneath(int index, const std::vector<std::string>& skip_tags) const {
    std::string out;
    std::vector<int> stack;
    const auto& start = node(index);
    for (auto it = start.children.rbegin(); it != start.children.rend(); ++it)
        stack.push_back(*it);
    while (!stack.empty()) {
        const int current = stack.back();
        stack.pop_back();
        const Node& n = node(current);
        if (n.kind == Node::Kind::text) {
            if (!n.text.empty()) {
                if (!out.empty()) out.push_back(' ');
                out.append(n.text);
            }
            continue;
        }
        if (std::find(skip_tags.begin(), skip_tags.end(), n.tag) != skip_tags.end()) continue;
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
    }
    return out;
}

std::vector<int> Document::select(std::string_view selector) const {
    return select_within(root(), selector);
}

std::vector<int> Document::select_within(int index, std::string_view selector_text) const {
    const Selector selector = parse_selector(selector_text);
    std::vector<int> out;
    // Document-order scan below `index`; ancestor walk checks the chain tail-first.
    std::vector<int> stack;
    const auto& start = node(index);
    for (auto it = start.children.rbegin(); it != start.children.rend(); ++it)
        stack.push_back(*it);
    while (!stack.empty()) {
        const int current = stack.back();
        stack.pop_back();
        const Node& n = node(current);
        if (n.kind == Node::Kind::element) {
            if (matches_compound(n, selector.chain.back())) {
                bool ok = true;
                int ancestor = n.parent;
                for (auto it = std::next(selector.chain.rbegin()); it != selector.chain.rend();
                     ++it) {
                    while (ancestor > 0 && ancestor != index &&
                           !matches_compound(node(ancestor), *it))
                        ancestor = node(ancestor).parent;
                    if (ancestor <= 0 || ancestor == index) {
                        ok = false;
                        break;
                    }
                    ancestor = node(ancestor).parent;
                }
                if (ok) out.push_back(current);
            }
            for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
                stack.push_back(*it);
        }
    }
    return out;
}

}  // namespace serpgauge::html
