#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace serpgauge::html {

struct Attribute {
    std::string name;   // lowercase
    std::string value;  // entity-decoded
};

struct Node {
    enum class Kind { element, text };

    Kind kind = Kind::element;
    std::string tag;   // lowercase, elements only
    std::string text;  // text nodes only, entity-decoded
    std::vector<Attribute> attributes;
    std::vector<int> children;
    int parent = -1;

    const std::string* attr(std::string_view name) const;
};

/// Tolerant HTML parser producing a flat-arena DOM. Handles comments,
/// doctype, raw-text elements (script/style), RCDATA (title/textarea),
/// void elements, and mismatched close tags.
class Document {
public:
    static Document parse(std::string_view html_text);

    int root() const { return 0; }
    const Node& node(int index) const { return nodes_[static_cast<std::size_t>(index)]; }
    int size() const { return static_cast<int>(nodes_.size()); }

    /// Concatenated text below `index`, skipping subtrees whose tag is in
    /// `skip_tags`; segments are space-joined.
    std::string text_beneath(int index, const std::vector<std::string>& skip_tags = {}) const;

    /// CSS-style selection: compound selectors `tag#id.class[attr=value]`
    /// chained with the descendant combinator. Results in document order.
    std::vector<int> select(std::string_view selector) const;
    std::vector<int> select_within(int index, std::string_view selector) const;

private:
    std::vector<Node> nodes_;
};

std::string decode_entities(std::string_view text);

}  // namespace serpgauge::html
