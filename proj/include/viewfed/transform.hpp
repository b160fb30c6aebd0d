#pragma once

#include "viewfed/document.hpp"
#include "viewfed/vpath.hpp"

namespace viewfed {

// Template documents drive output shape. Two directive attributes:
//   vf:for-each="<path>"  replicate this element once per matched node, each
//                         copy evaluated with that node as context
//   vf:value-of="<path>"  set this element's text to the string value of the
//                         first match (empty string when nothing matches)
// Directive attributes are stripped from the output.
struct TransformTemplate {
    Document body;
};

// Parses and checks the template: every directive value must be a valid path
// and vf:value-of elements must have no children.
TransformTemplate transform_parse(const Document& tpl);

Document transform_apply(const Document& doc, const TransformTemplate& tpl);

}  // namespace viewfed
