import json
from typing import Dict, List, Sequence

MARKERS = {
    "pass": "✅",
    "done": "✅",
    "fail": "❌",
    "inconclusive": "⚠️",
    "error": "⚠️",
}


def status_marker(status: str) -> str:
    return MARKERS.get(status, "•")


def _detail_lines(value, indent: str) -> List[str]:
    if isinstance(value, dict):
        out = []
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                out.append(f"{indent}{k}:")
                out.extend(_detail_lines(v, indent + "  "))
            else:
                out.append(f"{indent}{k}: {v}")
        return out
    if isinstance(value, list):
        out = []
        for item in value:
            if isinstance(item, (dict, list)):
                out.append(f"{indent}-")
                out.extend(_detail_lines(item, indent + "  "))
            else:
                out.append(f"{indent}- {item}")
        return out
    return [f"{indent}{value}"]


def summary(results) -> Dict[str, int]:
    counts = {"pass": 0, "done": 0, "fail": 0, "inconclusive": 0, "error": 0}
    for r in results:
        counts[r.status] = counts.get(r.status, 0) + 1
    return counts


def render_text(scenario_name: str, results: Sequence, code: int) -> str:
    lines = [f"scenario {scenario_name}"]
    for r in results:
        head = f"{status_marker(r.status)} {r.name}: {r.status}"
        if r.value is not None:
            head += f" [{r.value}]"
        lines.append(head)
        if r.witness is not None:
            lines.append(f"    witness: {r.witness}")
        if r.error is not None:
            lines.append(f"    error: {r.error}")
        if r.details:
            lines.extend(_detail_lines(r.details, "    "))
    counts = summary(results)
    lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in counts.items()) + f"; exit {code}")
    return "\n".join(lines) + "\n"


def render_structured(scenario_name: str, results: Sequence, code: int) -> str:
    doc = {
        "scenario": scenario_name,
        "tasks": [r.to_dict() for r in results],
        "summary": summary(results),
        "exit_code": code,
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def render(fmt: str, scenario_name: str, results: Sequence, code: int) -> str:
    if fmt == "structured":
        return render_structured(scenario_name, results, code)
    return render_text(scenario_name, results, code)
