#include "orf/report.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "orf/error.hpp"
#include "orf/score.hpp"

namespace orf {
namespace {

using nlohmann::json;

constexpr std::array<const char*, 4> kValueColumns = {"wer_percent", "wcpm_human", "wcpm_auto", "abs_diff"};

const char* mark_name(Mark mark) {
  switch (mark) {
    case Mark::Correct: return "correct";
    case Mark::Substituted: return "substituted";
    case Mark::Inserted: return "inserted";
    case Mark::Deleted: return "deleted";
  }
  return "";
}

std::string html_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

json legend_json(const MarkCounts& c) {
  return {{"correct", c.correct}, {"substituted", c.substituted}, {"inserted", c.inserted}, {"deleted", c.deleted}};
}

json segments_json(const AlignmentRendering& r) {
  json segs = json::array();
  for (const auto& s : r.segments) {
    json seg = {{"mark", mark_name(s.mark)}};
    if (s.mark != Mark::Inserted) seg["ref"] = s.ref;
    if (s.mark != Mark::Deleted) seg["hyp"] = s.hyp;
    segs.push_back(std::move(seg));
  }
  return segs;
}

std::string plain_markup(const AlignmentRendering& r) {
  std::string out;
  for (const auto& s : r.segments) {
    if (!out.empty()) out.push_back(' ');
    switch (s.mark) {
      case Mark::Correct: out += s.ref; break;
      case Mark::Inserted: out += "{+" + s.hyp + "+}"; break;
      case Mark::Deleted: out += "{-" + s.ref + "-}"; break;
      case Mark::Substituted: out += "{~" + s.ref + "→" + s.hyp + "~}"; break;
    }
  }
  return out;
}

std::string html_markup(const AlignmentRendering& r) {
  std::string out = "<p class=\"alignment\">";
  bool first = true;
  for (const auto& s : r.segments) {
    if (!first) out.push_back(' ');
    first = false;
    switch (s.mark) {
      case Mark::Correct: out += html_escape(s.ref); break;
      case Mark::Inserted: out += "<span class=\"ins\">" + html_escape(s.hyp) + "</span>"; break;
      case Mark::Deleted: out += "<span class=\"del\">" + html_escape(s.ref) + "</span>"; break;
      case Mark::Substituted:
        out += "<span class=\"sub\" data-ref=\"" + html_escape(s.ref) + "\">" + html_escape(s.hyp) + "</span>";
        break;
    }
  }
  out += "</p>";
  return out;
}

std::string fixed(double v, int decimals) { return fmt::format("{:.{}f}", v, decimals); }

// WER percent, WCPM and their differences are all printed with one decimal.
constexpr int kScoreDecimals = 1;

std::optional<double> column_value(const ScoreRow& row, std::size_t column) {
  switch (column) {
    case 0: return row.wer_percent;
    case 1: return row.wcpm_human;
    case 2: return row.wcpm_auto;
    case 3: return row.abs_diff();
  }
  return std::nullopt;
}

std::vector<double> column_values(std::span<const ScoreRow> rows, std::size_t column) {
  std::vector<double> out;
  for (const auto& row : rows)
    if (auto v = column_value(row, column)) out.push_back(*v);
  return out;
}

struct Pairs {
  std::vector<double> human;
  std::vector<double> automated;
};

Pairs complete_pairs(std::span<const ScoreRow> rows) {
  Pairs p;
  for (const auto& row : rows) {
    if (row.wcpm_human && row.wcpm_auto) {
      p.human.push_back(*row.wcpm_human);
      p.automated.push_back(*row.wcpm_auto);
    }
  }
  return p;
}

std::optional<double> pearson_if_defined(const Pairs& p) {
  if (p.human.size() < 2) return std::nullopt;
  try {
    return pearson(p.human, p.automated);
  } catch (const StatisticsError&) {
    return std::nullopt;
  }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string emit_json(std::span<const ScoreRow> rows, std::span<const RecordAlignment> alignments) {
  json doc = json::object();
  json records = json::array();
  for (const auto& row : rows) {
    records.push_back({{"id", row.id},
                       {"wer_percent", optional_number(row.wer_percent)},
                       {"wcpm_human", optional_number(row.wcpm_human)},
                       {"wcpm_auto", optional_number(row.wcpm_auto)},
                       {"abs_diff", optional_number(row.abs_diff())},
                       {"error", row.error ? json(*row.error) : json(nullptr)}});
  }
  doc["records"] = std::move(records);

  json summary = json::object();
  for (std::size_t c = 0; c < kValueColumns.size(); ++c) {
    const auto values = column_values(rows, c);
    if (values.empty()) {
      summary[kValueColumns[c]] = nullptr;
      continue;
    }
    const CohortSummary s = summarize(values);
    summary[kValueColumns[c]] = {{"n", s.count},
                                 {"mean", s.mean},
                                 {"min", s.min},
                                 {"max", s.max},
                                 {"variance", optional_number(s.variance)}};
  }
  doc["summary"] = std::move(summary);

  const Pairs pairs = complete_pairs(rows);
  if (pairs.human.empty()) {
    doc["agreement"] = nullptr;
  } else {
    const double mean_h = summarize(pairs.human).mean;
    const double mean_a = summarize(pairs.automated).mean;
    doc["agreement"] = {{"count", pairs.human.size()},
                        {"mean_human", mean_h},
                        {"mean_auto", mean_a},
                        {"mean_abs_diff", mean_abs_diff(pairs.human, pairs.automated)},
                        {"pearson_r", optional_number(pearson_if_defined(pairs))}};
  }

  if (!alignments.empty()) {
    json list = json::array();
    for (const auto& a : alignments)
      list.push_back({{"id", a.id}, {"segments", segments_json(a.rendering)}, {"legend", legend_json(a.rendering.legend)}});
    doc["alignments"] = std::move(list);
  }
  return doc.dump(2) + "\n";
}

std::string emit_csv(const SummaryTable& table) {
  std::string out = "id";
  for (const auto& c : table.column_labels) out += "," + c;
  out.push_back('\n');
  for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
    out += csv_escape(table.row_labels[r]);
    for (const auto& cell : table.cells[r]) out += "," + csv_escape(cell);
    out.push_back('\n');
  }
  return out;
}

std::string md_cell(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '|')
      out += "\\|";
    else if (c == '\n')
      out.push_back(' ');
    else
      out.push_back(c);
  }
  return out;
}

std::string emit_markdown(const SummaryTable& table, std::size_t record_rows,
                          std::span<const RecordAlignment> alignments) {
  std::string out = "# " + table.title + "\n\n| id |";
  for (const auto& c : table.column_labels) out += " " + c + " |";
  out += "\n|---|";
  for (std::size_t c = 0; c < table.column_labels.size(); ++c) out += "---:|";
  out.push_back('\n');
  for (std::size_t r = 0; r < table.row_labels.size(); ++r) {
    const std::string label = md_cell(table.row_labels[r]);
    out += "| " + (r < record_rows ? label : "**" + label + "**") + " |";
    for (const auto& cell : table.cells[r]) out += " " + md_cell(cell) + " |";
    out.push_back('\n');
  }
  if (!alignments.empty()) {
    out += "\n## Alignments\n";
    for (const auto& a : alignments) {
      const auto& l = a.rendering.legend;
      out += fmt::format("\n### {}\n\ncorrect {}, substituted {}, inserted {}, deleted {}\n\n    {}\n", a.id,
                         l.correct, l.substituted, l.inserted, l.deleted, plain_markup(a.rendering));
    }
  }
  return out;
}

// RFC 4180 records.
std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (field_started || !field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      field_started = false;
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
  if (field_started || !field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<double> parse_cell(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: \"" + cell + "\"");
  }
  if (used != cell.size()) throw std::invalid_argument("not a number: \"" + cell + "\"");
  return v;
}

std::vector<ScoreRow> parse_json_rows(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed results JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("records") || !doc["records"].is_array())
    throw std::invalid_argument("results JSON has no \"records\" array");
  auto number = [](const json& obj, const char* key) -> std::optional<double> {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) throw std::invalid_argument(std::string("field \"") + key + "\" must be a number");
    return it->get<double>();
  };
  std::vector<ScoreRow> rows;
  for (const auto& rec : doc["records"]) {
    if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string())
      throw std::invalid_argument("results record without a string \"id\"");
    ScoreRow row;
    row.id = rec["id"].get<std::string>();
    row.wer_percent = number(rec, "wer_percent");
    row.wcpm_human = number(rec, "wcpm_human");
    row.wcpm_auto = number(rec, "wcpm_auto");
    if (auto it = rec.find("error"); it != rec.end() && it->is_string()) row.error = it->get<std::string>();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ScoreRow> parse_csv_rows(std::string_view text) {
  const auto table = parse_csv(text);
  if (table.empty()) throw std::invalid_argument("empty results CSV");
  const auto& header = table.front();
  const std::vector<std::string> expected = {"id", "wer_percent", "wcpm_human", "wcpm_auto", "abs_diff"};
  if (header.size() < expected.size() || !std::equal(expected.begin(), expected.end(), header.begin()))
    throw std::invalid_argument("results CSV header must start with id,wer_percent,wcpm_human,wcpm_auto,abs_diff");
  const bool has_errors = header.size() > expected.size() && header[expected.size()] == "errors";

  // The footer block starts at the last "mean" row.
  std::size_t end = table.size();
  for (std::size_t r = table.size(); r-- > 1;) {
    if (!table[r].empty() && table[r][0] == "mean") {
      end = r;
      break;
    }
  }
  std::vector<ScoreRow> rows;
  for (std::size_t r = 1; r < end; ++r) {
    const auto& cells = table[r];
    if (cells.size() != header.size())
      throw std::invalid_argument("results CSV row " + std::to_string(r + 1) + " has " + std::to_string(cells.size()) +
                                  " fields, expected " + std::to_string(header.size()));
    ScoreRow row;
    row.id = cells[0];
    row.wer_percent = parse_cell(cells[1]);
    row.wcpm_human = parse_cell(cells[2]);
    row.wcpm_auto = parse_cell(cells[3]);
    if (has_errors && !cells[5].empty()) row.error = cells[5];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

AlignmentRendering build_rendering(const Alignment& alignment, const TokenSequence& reference,
                                   const TokenSequence& hypothesis) {
  if (alignment.ref_len != reference.size() || alignment.hyp_len != hypothesis.size())
    throw ConsistencyError(fmt::format("alignment covers {}x{} tokens but sequences have {}x{}", alignment.ref_len,
                                       alignment.hyp_len, reference.size(), hypothesis.size()));
  AlignmentRendering out;
  out.segments.reserve(alignment.ops.size());
  std::size_t next_ref = 0;
  std::size_t next_hyp = 0;
  auto take_ref = [&](const AlignmentOp& op) -> const std::string& {
    if (!op.ref_index || *op.ref_index != next_ref || next_ref >= reference.size())
      throw ConsistencyError("alignment reference indices are out of order or out of range");
    return reference[next_ref++];
  };
  auto take_hyp = [&](const AlignmentOp& op) -> const std::string& {
    if (!op.hyp_index || *op.hyp_index != next_hyp || next_hyp >= hypothesis.size())
      throw ConsistencyError("alignment hypothesis indices are out of order or out of range");
    return hypothesis[next_hyp++];
  };
  for (const auto& op : alignment.ops) {
    switch (op.kind) {
      case OpKind::Match: {
        const std::string& r = take_ref(op);
        const std::string& h = take_hyp(op);
        if (r != h) throw ConsistencyError("match op pairs different words \"" + r + "\" and \"" + h + "\"");
        out.segments.push_back({Mark::Correct, r, h});
        ++out.legend.correct;
        break;
      }
      case OpKind::Substitution: {
        const std::string& r = take_ref(op);
        const std::string& h = take_hyp(op);
        if (r == h) throw ConsistencyError("substitution op pairs identical words \"" + r + "\"");
        out.segments.push_back({Mark::Substituted, r, h});
        ++out.legend.substituted;
        break;
      }
      case OpKind::Insertion:
        if (op.ref_index) throw ConsistencyError("insertion op carries a reference index");
        out.segments.push_back({Mark::Inserted, {}, take_hyp(op)});
        ++out.legend.inserted;
        break;
      case OpKind::Deletion:
        if (op.hyp_index) throw ConsistencyError("deletion op carries a hypothesis index");
        out.segments.push_back({Mark::Deleted, take_ref(op), {}});
        ++out.legend.deleted;
        break;
    }
  }
  if (next_ref != reference.size() || next_hyp != hypothesis.size())
    throw ConsistencyError("alignment does not cover every token");
  return out;
}

std::string serialize(const AlignmentRendering& rendering, RenderFormat format) {
  switch (format) {
    case RenderFormat::PlainMarkup: return plain_markup(rendering);
    case RenderFormat::Html: return html_markup(rendering);
    case RenderFormat::Json:
      return json{{"segments", segments_json(rendering)}, {"legend", legend_json(rendering.legend)}}.dump();
  }
  return {};
}

std::string render_alignment(const Alignment& alignment, const TokenSequence& reference,
                             const TokenSequence& hypothesis, RenderFormat format) {
  return serialize(build_rendering(alignment, reference, hypothesis), format);
}

std::optional<double> ScoreRow::abs_diff() const {
  if (!wcpm_human || !wcpm_auto) return std::nullopt;
  return std::abs(*wcpm_human - *wcpm_auto);
}

SummaryTable build_summary_table(std::span<const ScoreRow> rows) {
  if (rows.empty()) throw StatisticsError("cannot build a summary of zero recordings");
  SummaryTable t;
  t.title = "Reading fluency scores";
  t.column_labels.assign(kValueColumns.begin(), kValueColumns.end());
  const bool any_error = std::any_of(rows.begin(), rows.end(), [](const ScoreRow& r) { return r.error.has_value(); });
  if (any_error) t.column_labels.push_back("errors");
  const std::size_t width = t.column_labels.size();

  for (const auto& row : rows) {
    t.row_labels.push_back(row.id);
    std::vector<std::string> cells(width);
    for (std::size_t c = 0; c < kValueColumns.size(); ++c)
      if (auto v = column_value(row, c)) cells[c] = fixed(*v, kScoreDecimals);
    if (any_error && row.error) cells[kValueColumns.size()] = *row.error;
    t.cells.push_back(std::move(cells));
  }

  std::array<std::optional<CohortSummary>, kValueColumns.size()> stats;
  for (std::size_t c = 0; c < kValueColumns.size(); ++c) {
    const auto values = column_values(rows, c);
    if (!values.empty()) stats[c] = summarize(values);
  }
  auto footer = [&](const char* label, auto&& cell_of) {
    t.row_labels.emplace_back(label);
    std::vector<std::string> cells(width);
    for (std::size_t c = 0; c < kValueColumns.size(); ++c)
      if (stats[c]) cells[c] = cell_of(*stats[c], c);
    t.cells.push_back(std::move(cells));
  };
  footer("mean", [](const CohortSummary& s, std::size_t) { return fixed(s.mean, kScoreDecimals); });
  footer("min", [](const CohortSummary& s, std::size_t) { return fixed(s.min, kScoreDecimals); });
  footer("max", [](const CohortSummary& s, std::size_t) { return fixed(s.max, kScoreDecimals); });
  footer("variance", [](const CohortSummary& s, std::size_t) { return s.variance ? fixed(*s.variance, 2) : ""; });
  footer("n", [](const CohortSummary& s, std::size_t) { return std::to_string(s.count); });

  const Pairs pairs = complete_pairs(rows);
  if (!pairs.human.empty()) {
    t.row_labels.emplace_back("mean_abs_diff");
    std::vector<std::string> cells(width);
    cells[3] = fixed(mean_abs_diff(pairs.human, pairs.automated), 1);
    t.cells.push_back(std::move(cells));
    if (auto r = pearson_if_defined(pairs)) {
      t.row_labels.emplace_back("pearson_r");
      std::vector<std::string> rcells(width);
      rcells[3] = fixed(*r, 3);
      t.cells.push_back(std::move(rcells));
    }
  }
  return t;
}

std::string emit_summary(std::span<const ScoreRow> rows, TableFormat format,
                         std::span<const RecordAlignment> alignments) {
  if (rows.empty()) throw StatisticsError("cannot build a summary of zero recordings");
  switch (format) {
    case TableFormat::Json: return emit_json(rows, alignments);
    case TableFormat::Csv: return emit_csv(build_summary_table(rows));
    case TableFormat::Markdown: return emit_markdown(build_summary_table(rows), rows.size(), alignments);
  }
  return {};
}

std::vector<ScoreRow> parse_summary(std::string_view text) {
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json_rows(text);
  return parse_csv_rows(text);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace orf
