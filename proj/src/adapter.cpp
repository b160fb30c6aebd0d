#include "viewfed/adapter.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>

namespace viewfed {

namespace fs = std::filesystem;

std::string to_string(SourceErrorClass c) {
    switch (c) {
        case SourceErrorClass::Unavailable: return "source_unavailable";
        case SourceErrorClass::Timeout: return "source_timeout";
        case SourceErrorClass::HttpStatus: return "http_status";
        case SourceErrorClass::Malformed: return "source_malformed";
        case SourceErrorClass::Validation: return "validation_error";
    }
    return "unknown";
}

std::vector<std::string> AdapterSpec::base_views() const {
    if (const auto* d = std::get_if<DerivedAdapter>(&impl)) return d->base_views;
    if (const auto* j = std::get_if<JoinAdapter>(&impl)) {
        std::vector<std::string> names;
        for (const auto& s : j->spec.sources) names.push_back(s.view);
        return names;
    }
    return {};
}

bool AdapterSpec::writable() const {
    const auto* f = std::get_if<FileAdapter>(&impl);
    return f && f->writable && f->format != FileFormat::Csv;
}

std::string AdapterSpec::kind() const {
    struct Visitor {
        std::string operator()(const FileAdapter&) const { return "file"; }
        std::string operator()(const HttpAdapter&) const { return "http"; }
        std::string operator()(const TableAdapter&) const { return "table"; }
        std::string operator()(const DerivedAdapter&) const { return "derived"; }
        std::string operator()(const JoinAdapter&) const { return "join"; }
    };
    return std::visit(Visitor{}, impl);
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SourceError(SourceErrorClass::Unavailable, "cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw SourceError(SourceErrorClass::Unavailable, "read failed: " + path);
    return buf.str();
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == delim) {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

}  // namespace

Document file_adapter(const std::string& path, FileFormat format) {
    if (format == FileFormat::Csv)
        return table_adapter(path, ',', true, "table", "row");
    std::string content = read_file(path);
    try {
        return doc_parse(content, format == FileFormat::Xml ? DocFormat::Xml : DocFormat::Json);
    } catch (const ParseError& e) {
        throw SourceError(SourceErrorClass::Malformed, std::string(e.what()) + " (" + path + ")");
    }
}

Document table_adapter(const std::string& path, char delimiter, bool has_header,
                       const std::string& table_element, const std::string& row_element) {
    std::string content = read_file(path);

    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(content);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();

    Document doc;
    doc.root = Node(table_element);
    if (lines.empty()) return doc;

    std::vector<std::string> columns;
    std::size_t first_row = 0;
    if (has_header) {
        columns = split(lines[0], delimiter);
        first_row = 1;
        for (const std::string& col : columns) {
            if (!valid_attribute_name(col))
                throw SourceError(SourceErrorClass::Malformed,
                                  "header cell is not a valid attribute name: '" + col + "'");
        }
    } else {
        for (std::size_t i = 0; i < split(lines[0], delimiter).size(); ++i)
            columns.push_back("col" + std::to_string(i + 1));
    }

    for (std::size_t i = first_row; i < lines.size(); ++i) {
        std::vector<std::string> cells = split(lines[i], delimiter);
        if (cells.size() != columns.size())
            throw SourceError(SourceErrorClass::Malformed,
                              "row " + std::to_string(i + 1) + " has " +
                                  std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(columns.size()));
        Node row(row_element);
        for (std::size_t c = 0; c < columns.size(); ++c) row.set_attribute(columns[c], cells[c]);
        doc.root.add_child(std::move(row));
    }
    return doc;
}

Document http_adapter(const std::string& url, const std::map<std::string, std::string>& headers,
                      DocFormat expect_format, TimeMs timeout_ms) {
    auto path_start = url.find('/', url.find("://") == std::string::npos
                                        ? 0
                                        : url.find("://") + 3);
    std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(std::chrono::milliseconds(timeout_ms));
    client.set_read_timeout(std::chrono::milliseconds(timeout_ms));

    httplib::Headers hdrs;
    for (const auto& [k, v] : headers) hdrs.emplace(k, v);

    auto start = std::chrono::steady_clock::now();
    httplib::Result res = client.Get(path, hdrs);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();

    if (!res) {
        bool timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                         elapsed >= timeout_ms;
        if (timed_out)
            throw SourceError(SourceErrorClass::Timeout,
                              "request to " + url + " exceeded " + std::to_string(timeout_ms) +
                                  "ms");
        throw SourceError(SourceErrorClass::Unavailable,
                          "request to " + url + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300)
        throw SourceError(SourceErrorClass::HttpStatus,
                          url + " returned HTTP " + std::to_string(res->status), res->status);
    try {
        return doc_parse(res->body, expect_format);
    } catch (const ParseError& e) {
        throw SourceError(SourceErrorClass::Malformed, std::string(e.what()) + " (" + url + ")");
    }
}

Document derived_adapter(const std::map<std::string, Document>& base_contents,
                         const std::vector<std::string>& base_views,
                         const TransformTemplate& transform) {
    for (const std::string& base : base_views) {
        if (!base_contents.count(base)) throw DependencyUnsatisfiedError(base);
    }
    if (base_views.size() == 1) {
        return transform_apply(base_contents.at(base_views.front()), transform);
    }
    Document synthetic;
    synthetic.root = Node("bases");
    for (const std::string& base : base_views) {
        Node wrapper("base");
        wrapper.set_attribute("view", base);
        wrapper.add_child(base_contents.at(base).root);
        synthetic.root.add_child(std::move(wrapper));
    }
    return transform_apply(synthetic, transform);
}

Document adapter_generate(const AdapterSpec& spec, const GenContext& ctx) {
    struct Visitor {
        const GenContext& ctx;
        Document operator()(const FileAdapter& a) const { return file_adapter(a.path, a.format); }
        Document operator()(const HttpAdapter& a) const {
            return http_adapter(a.url, a.headers, a.expect_format, ctx.timeout_ms);
        }
        Document operator()(const TableAdapter& a) const {
            return table_adapter(a.path, a.delimiter, a.has_header, a.table_element,
                                 a.row_element);
        }
        Document operator()(const DerivedAdapter& a) const {
            return derived_adapter(ctx.bases, a.base_views, a.transform);
        }
        Document operator()(const JoinAdapter& a) const {
            for (const auto& s : a.spec.sources) {
                if (!ctx.sources.count(s.view)) throw DependencyUnsatisfiedError(s.view);
            }
            return join_by_key(a.spec, ctx.sources);
        }
    };
    return std::visit(Visitor{ctx}, spec.impl);
}

void write_view(const AdapterSpec& spec, const Document& doc) {
    const auto* file = std::get_if<FileAdapter>(&spec.impl);
    if (!file || !file->writable || file->format == FileFormat::Csv)
        throw NotWritableError("view adapter is not writable");

    std::string serialized = doc_serialize(
        doc, file->format == FileFormat::Xml ? DocFormat::Xml : DocFormat::Json);
    std::string tmp = file->path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp + " for writing");
        out << serialized;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write to " + tmp + " failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, file->path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("rename to " + file->path + " failed: " + ec.message());
    }
}

}  // namespace viewfed
