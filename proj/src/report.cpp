#include "pytrim/report.hpp"

#include "pytrim/diff.hpp"
#include "pytrim/text.hpp"

#include "json.hpp"

namespace pytrim {

namespace {

using Json = nlohmann::ordered_json;

std::string where(const SourceLocation &loc) { return loc.file_path + ":" + std::to_string(loc.line); }

std::vector<const FileEdit *> edits_removing(const EditPlan &plan, const PackageName &package) {
  std::vector<const FileEdit *> out;
  for (const auto &e : plan.file_edits) {
    if (e.removed_packages.count(package))
      out.push_back(&e);
  }
  return out;
}

std::string provenance_of(const ReportInput &input, const PackageName &package) {
  auto it = input.provenance.find(package.normalized());
  return it == input.provenance.end() ? std::string() : std::string(to_string(it->second));
}

std::string markdown(const ReportInput &input) {
  std::string out = "# Unused dependency report: " + input.project + "\n\n";
  if (input.findings.empty()) {
    out += "No unused dependencies found.\n";
  } else {
    out += std::to_string(input.findings.size()) +
           (input.findings.size() == 1 ? " unused dependency found.\n" : " unused dependencies found.\n");
  }

  for (const auto &f : input.findings) {
    out += "\n## " + f.package.raw() + "\n\n";
    out += "- Detector: " + f.detector_id + "\n";
    if (const auto p = provenance_of(input, f.package); !p.empty())
      out += "- Resolution: " + p + "\n";
    if (f.report_only) {
      out += "- Not removed: no declaration found in any configuration file\n";
      continue;
    }
    const auto edits = edits_removing(input.plan, f.package);
    out += "- Declarations:\n";
    for (const auto &loc : f.declared_at) {
      const bool edited = std::any_of(edits.begin(), edits.end(),
                                      [&](const FileEdit *e) { return e->file_path == loc.file_path; });
      out += "  - `" + where(loc) + "`" + (loc.detail.empty() ? "" : " (" + loc.detail + ")") +
             (edited ? "" : " - not edited") + "\n";
    }
    if (!f.import_sites.empty()) {
      out += "- Imports:\n";
      for (const auto &site : f.import_sites)
        out += "  - `" + where(site.location) + "` " + site.module_path + " (" + std::string(to_string(site.kind)) + ")\n";
    }
  }

  if (!input.plan.manual_flags.empty()) {
    out += "\n## Manual review\n\n";
    for (const auto &flag : input.plan.manual_flags)
      out += "- `" + where(flag.location) + "`: " + flag.reason + "\n";
  }
  if (!input.plan.lockfile_warnings.empty()) {
    out += "\n## Lock files\n\n";
    for (const auto &w : input.plan.lockfile_warnings)
      out += "- " + w + "\n";
  }
  if (!input.warnings.empty()) {
    out += "\n## Warnings\n\n";
    for (const auto &w : input.warnings)
      out += "- " + w + "\n";
  }
  if (!input.plan.file_edits.empty()) {
    out += "\n## Changes\n";
    for (const auto &e : input.plan.file_edits) {
      out += "\n```diff\n" + unified_diff(e.original_content, e.new_content, e.file_path) + "```\n";
    }
  }
  return out;
}

Json location_json(const SourceLocation &loc) {
  Json j;
  j["file"] = loc.file_path;
  j["line"] = loc.line;
  j["kind"] = std::string(to_string(loc.file_kind));
  j["detail"] = loc.detail;
  return j;
}

std::string json(const ReportInput &input) {
  Json root;
  root["version"] = std::string(kReportSchemaVersion);
  root["project"] = input.project;

  Json findings = Json::array();
  for (const auto &f : input.findings) {
    Json j;
    j["package"] = f.package.raw();
    j["normalized"] = f.package.normalized();
    j["detector"] = f.detector_id;
    const auto p = provenance_of(input, f.package);
    j["provenance"] = p.empty() ? Json(nullptr) : Json(p);
    j["report_only"] = f.report_only;
    Json decls = Json::array();
    for (const auto &loc : f.declared_at)
      decls.push_back(location_json(loc));
    j["declarations"] = decls;
    Json imports = Json::array();
    for (const auto &site : f.import_sites) {
      Json s;
      s["file"] = site.location.file_path;
      s["line"] = site.location.line;
      s["module"] = site.module_path;
      s["kind"] = std::string(to_string(site.kind));
      imports.push_back(s);
    }
    j["imports"] = imports;
    findings.push_back(j);
  }
  root["findings"] = findings;

  Json edits = Json::array();
  for (const auto &e : input.plan.file_edits) {
    Json j;
    j["file"] = e.file_path;
    j["kind"] = std::string(to_string(e.file_kind));
    Json removed = Json::array();
    for (const auto &p : e.removed_packages)
      removed.push_back(p.raw());
    j["removed"] = removed;
    j["diff"] = unified_diff(e.original_content, e.new_content, e.file_path);
    edits.push_back(j);
  }
  root["edits"] = edits;

  Json flags = Json::array();
  for (const auto &flag : input.plan.manual_flags) {
    Json j;
    j["file"] = flag.location.file_path;
    j["line"] = flag.location.line;
    j["reason"] = flag.reason;
    flags.push_back(j);
  }
  root["flags"] = flags;

  Json warnings = Json::array();
  for (const auto &w : input.plan.lockfile_warnings)
    warnings.push_back(w);
  for (const auto &w : input.warnings)
    warnings.push_back(w);
  root["warnings"] = warnings;
  return root.dump(2) + "\n";
}

} // namespace

std::string render_report(const ReportInput &input, ReportFormat format) {
  return format == ReportFormat::Json ? json(input) : markdown(input);
}

std::string pr_title(const std::vector<BloatFinding> &findings) {
  std::vector<std::string> names;
  for (const auto &f : findings) {
    if (!f.report_only)
      names.push_back(f.package.raw());
  }
  return "Remove unused dependencies: " + text::join(names, ", ");
}

} // namespace pytrim
