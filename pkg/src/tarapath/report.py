"""Analysis reports: stable JSON and human-readable Markdown.

The JSON form is byte-stable for identical inputs: keys are sorted,
findings keep evaluation order, and scores are rounded to three decimals.
The Markdown form prints every work product of each finding.
"""

from __future__ import annotations

import json

from tarapath import __version__
from tarapath.compiler import ThreatRule
from tarapath.dsl import render
from tarapath.matching import Finding
from tarapath.model import Model

RISK_VALUES = (1, 2, 3, 4, 5)


def build_report(
    model: Model,
    rules: list[ThreatRule],
    findings: list[Finding],
    model_path: str = "",
    rules_path: str = "",
    config_name: str = "default",
) -> dict:
    """Assemble the report structure; totals recompute from the findings."""
    totals = {str(risk): 0 for risk in RISK_VALUES}
    for finding in findings:
        if isinstance(finding.rule, ThreatRule):
            totals[str(finding.rule.risk)] += 1

    return {
        "tool": {"name": "tarapath", "version": __version__, "config": config_name},
        "model": {
            "path": model_path,
            "elements": len(model.elements),
            "connectors": len(model.connectors),
            "boundaries": len(model.boundaries),
            "assets": len(model.assets),
        },
        "rules": {"path": rules_path, "count": len(rules)},
        "findings": [_finding_record(finding) for finding in findings],
        "totals_by_risk": totals,
        "secure": not findings,
    }


def _finding_record(finding: Finding) -> dict:
    record: dict = {
        "rule": finding.rule_id,
        "witness": {
            "matched": list(finding.witness.matched),
            "path": list(finding.witness.path) if finding.witness.path else None,
        },
    }
    rule = finding.rule
    if isinstance(rule, ThreatRule):
        record["work_products"] = {
            "title": rule.title,
            "asset": rule.asset_name,
            "damage_scenario": rule.damage_scenario,
            "attack_path": list(rule.attack_path),
            "threat_scenario": rule.threat_scenario,
            "threat_type": rule.threat_type,
            "feasibility": rule.feasibility,
            "feasibility_score": round(rule.feasibility_score, 3),
            "exploit_vector": rule.exploit_vector.describe(),
            "impact": rule.impact.describe(),
            "risk": rule.risk,
            "rule": render(rule.pattern),
        }
    return record


def max_risk(findings: list[Finding]) -> int:
    """Highest risk value among the findings; 0 when there are none."""
    risks = [f.rule.risk for f in findings if isinstance(f.rule, ThreatRule)]
    return max(risks, default=0)


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def render_markdown(report: dict) -> str:
    lines: list[str] = ["# Threat analysis report", ""]
    model = report["model"]
    rules = report["rules"]
    lines.append(
        f"- Model: `{model['path'] or '(inline)'}` — {model['elements']} elements, "
        f"{model['connectors']} connectors, {model['boundaries']} boundaries, "
        f"{model['assets']} assets"
    )
    lines.append(f"- Rule pack: `{rules['path'] or '(inline)'}` — {rules['count']} rules")
    lines.append(f"- Findings: {len(report['findings'])}")
    verdict = "yes" if report["secure"] else "no"
    lines.append(f"- Secure with respect to the rule pack: {verdict}")
    lines.append("")

    lines.append("## Totals by risk value")
    lines.append("")
    lines.append("| Risk | Findings |")
    lines.append("| --- | --- |")
    for risk in RISK_VALUES:
        lines.append(f"| {risk} | {report['totals_by_risk'][str(risk)]} |")
    lines.append("")

    if report["findings"]:
        lines.append("## Findings")
        lines.append("")
    for record in report["findings"]:
        lines.extend(_finding_markdown(record))
    return "\n".join(lines).rstrip() + "\n"


def _finding_markdown(record: dict) -> list[str]:
    products = record.get("work_products")
    title = products["title"] if products else record["rule"]
    lines = [f"### {record['rule']}: {title}", ""]
    if products:
        lines.append("| Work product | Value |")
        lines.append("| --- | --- |")
        lines.append(f"| Title | {products['title']} |")
        lines.append(f"| Asset | {products['asset']} |")
        lines.append(f"| Damage scenario | {products['damage_scenario']} |")
        attack_path = "<br>".join(
            f"{i}. {step}" for i, step in enumerate(products["attack_path"], start=1)
        )
        lines.append(f"| Attack path | {attack_path} |")
        lines.append(f"| Threat scenario | {products['threat_scenario']} |")
        lines.append(f"| Threat type | {products['threat_type']} |")
        lines.append(
            f"| Feasibility | {products['feasibility']} "
            f"({products['exploit_vector']}; E = {products['feasibility_score']:.3f}) |"
        )
        lines.append(f"| Impact | {products['impact']} |")
        lines.append(f"| Risk | {products['risk']} |")
        lines.append("")
        lines.append("Rule:")
        lines.append("")
        lines.append("```")
        lines.append(products["rule"])
        lines.append("```")
        lines.append("")
    witness = record["witness"]
    if witness["path"]:
        lines.append(f"Witness path: `{' -> '.join(witness['path'])}`")
    else:
        lines.append(f"Witness: `{', '.join(witness['matched'])}`")
    lines.append("")
    return lines
