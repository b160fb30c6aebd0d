#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "viewfed/compose.hpp"
#include "viewfed/document.hpp"
#include "viewfed/transform.hpp"

namespace viewfed {

enum class FileFormat { Xml, Json, Csv };

struct FileAdapter {
    std::string path;
    FileFormat format = FileFormat::Xml;
    bool writable = false;  // csv is always read-only
};

struct HttpAdapter {
    std::string url;  // http(s) only; single GET
    std::map<std::string, std::string> headers;
    DocFormat expect_format = DocFormat::Xml;
};

struct TableAdapter {
    std::string path;
    char delimiter = ',';
    bool has_header = true;
    std::string table_element = "table";
    std::string row_element = "row";
};

struct DerivedAdapter {
    std::vector<std::string> base_views;
    TransformTemplate transform;
};

// Produced by expanding a JoinSpec; bases arrive with availability state so
// the join can mark stale and unavailable sources.
struct JoinAdapter {
    JoinSpec spec;
};

struct AdapterSpec {
    std::variant<FileAdapter, HttpAdapter, TableAdapter, DerivedAdapter, JoinAdapter> impl;

    std::vector<std::string> base_views() const;  // empty for source kinds
    bool writable() const;
    std::string kind() const;  // "file" | "http" | "table" | "derived" | "join"
};

struct GenContext {
    std::map<std::string, Document> bases;          // derived adapters
    std::map<std::string, SourceContent> sources;   // join adapters
    TimeMs timeout_ms = 10000;
};

Document adapter_generate(const AdapterSpec& spec, const GenContext& ctx);

Document file_adapter(const std::string& path, FileFormat format);
Document http_adapter(const std::string& url, const std::map<std::string, std::string>& headers,
                      DocFormat expect_format, TimeMs timeout_ms);
Document table_adapter(const std::string& path, char delimiter, bool has_header,
                       const std::string& table_element, const std::string& row_element);
Document derived_adapter(const std::map<std::string, Document>& base_contents,
                         const std::vector<std::string>& base_views,
                         const TransformTemplate& transform);

// Atomic write (temp file + rename) for writable file views.
void write_view(const AdapterSpec& spec, const Document& doc);

}  // namespace viewfed
