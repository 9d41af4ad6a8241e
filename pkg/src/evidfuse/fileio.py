"""File formats consumed and produced by the command-line interface.

JSON inputs
    mass function      {"frame": [labels...], "masses": {"A|B": 0.1, ...}}
    confusion matrix   {"frame": [labels...], "matrix": [[row]...]}
    simulation config  {"frame": [...], "confusion": [[...]], "segments":
                        [["Cargo", 30], ...], "runs": N, "master_seed": S,
                        "rules": [{"rule": "tcn", "tnorm": "min",
                        "tconorm": "max"}, ...], "criterion": "belief"}

Subset keys spell the included labels joined by "|" in frame order.
Validation errors carry the offending field path.

CSV outputs quote with the stdlib csv module, print masses with 12
significant digits, and sanitize frame labels in column names
(non-alphanumerics become underscores); the mapping from sanitized column
names back to subsets is echoed in a leading "#" comment line.
"""

from __future__ import annotations

import csv
import io
import json
import re
from typing import Sequence

from .core import DecisionCriterion, Frame, MassFunction, make_bba, make_frame
from .errors import ConfigError, EvidenceError
from .montecarlo import AveragedTrace, MonteCarloConfig, Scenario
from .rules import Rule, RuleConfig
from .operators import parse_tconorm, parse_tnorm
from .tracker import ConfusionMatrix, TrackRecord

_MASS_DIGITS = ".12g"


# ---------------------------------------------------------------------------
# JSON input formats
# ---------------------------------------------------------------------------

def _require(data: dict, key: str, kind, path: str):
    if key not in data:
        raise ConfigError("%s.%s: missing required field" % (path, key) if path else "%s: missing required field" % key)
    value = data[key]
    if kind is int:
        # bool is an int subclass; floats with integral values are not accepted
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError("%s: expected an integer, got %r" % (_join(path, key), value))
    elif not isinstance(value, kind):
        raise ConfigError("%s: expected %s, got %r" % (_join(path, key), kind.__name__, value))
    return value


def _join(path: str, key: str) -> str:
    return "%s.%s" % (path, key) if path else key


def frame_from_json(data: object, path: str = "frame") -> Frame:
    if not isinstance(data, list) or not all(isinstance(x, str) for x in data):
        raise ConfigError("%s: expected a list of label strings" % path)
    try:
        return make_frame(data)
    except EvidenceError as exc:
        raise ConfigError("%s: %s" % (path, exc)) from exc


def mass_function_from_json(data: object, path: str = "") -> MassFunction:
    if not isinstance(data, dict):
        raise ConfigError("%s: expected a JSON object" % (path or "mass function"))
    frame = frame_from_json(_require(data, "frame", list, path), _join(path, "frame"))
    raw = _require(data, "masses", dict, path)
    entries = {}
    for key, value in raw.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError("%s[%r]: expected a number, got %r" % (_join(path, "masses"), key, value))
        entries[str(key)] = float(value)
    try:
        return make_bba(frame, entries)
    except EvidenceError as exc:
        raise ConfigError("%s: %s" % (_join(path, "masses"), exc)) from exc


def load_mass_function(path: str) -> MassFunction:
    return mass_function_from_json(_load_json(path), path="")


def mass_function_to_json(m: MassFunction) -> dict:
    return {
        "frame": list(m.frame.labels),
        "masses": {m.frame.format_subset(bits): m.masses[bits] for bits in sorted(m.masses)},
    }


def confusion_rows_from_json(frame: Frame, data: object, path: str) -> ConfusionMatrix:
    if not isinstance(data, list):
        raise ConfigError("%s: expected a list of rows" % path)
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in row
        ):
            raise ConfigError("%s[%d]: expected a list of numbers" % (path, i))
        rows.append(tuple(float(v) for v in row))
    try:
        return ConfusionMatrix(frame, tuple(rows))
    except EvidenceError as exc:
        raise ConfigError("%s: %s" % (path, exc)) from exc


def load_confusion(path: str) -> ConfusionMatrix:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ConfigError("confusion file: expected a JSON object")
    frame = frame_from_json(_require(data, "frame", list, ""), "frame")
    return confusion_rows_from_json(frame, _require(data, "matrix", list, ""), "matrix")


def rule_config_from_json(data: object, path: str) -> RuleConfig:
    if not isinstance(data, dict):
        raise ConfigError("%s: expected an object like {\"rule\": \"pcr5\"}" % path)
    name = _require(data, "rule", str, path)
    try:
        rule = Rule(name.strip().lower())
    except ValueError:
        raise ConfigError(
            "%s.rule: unknown rule %r (choose from %s)"
            % (path, name, ", ".join(r.value for r in Rule))
        ) from None
    tnorm = tconorm = None
    if rule is Rule.TCN:
        try:
            tnorm = parse_tnorm(_require(data, "tnorm", str, path))
        except ValueError as exc:
            raise ConfigError("%s.tnorm: %s" % (path, exc)) from None
        try:
            tconorm = parse_tconorm(_require(data, "tconorm", str, path))
        except ValueError as exc:
            raise ConfigError("%s.tconorm: %s" % (path, exc)) from None
    elif "tnorm" in data or "tconorm" in data:
        raise ConfigError("%s: t-norm/t-conorm are only valid for the tcn rule" % path)
    return RuleConfig(rule, tnorm, tconorm)


def rule_config_to_json(cfg: RuleConfig) -> dict:
    data = {"rule": cfg.rule.value}
    if cfg.rule is Rule.TCN:
        data["tnorm"] = cfg.tnorm.value
        data["tconorm"] = cfg.tconorm.value
    return data


def simulation_config_from_json(data: object) -> MonteCarloConfig:
    if not isinstance(data, dict):
        raise ConfigError("config file: expected a JSON object")
    frame = frame_from_json(_require(data, "frame", list, ""), "frame")
    confusion = confusion_rows_from_json(frame, _require(data, "confusion", list, ""), "confusion")

    raw_segments = _require(data, "segments", list, "")
    segments = []
    for i, item in enumerate(raw_segments):
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not isinstance(item[0], str)
            or isinstance(item[1], bool)
            or not isinstance(item[1], int)
        ):
            raise ConfigError("segments[%d]: expected [\"label\", scans]" % i)
        segments.append((item[0], item[1]))
    try:
        scenario = Scenario(frame, tuple(segments))
    except EvidenceError as exc:
        raise ConfigError("segments: %s" % exc) from exc

    raw_rules = _require(data, "rules", list, "")
    rules = tuple(rule_config_from_json(item, "rules[%d]" % i) for i, item in enumerate(raw_rules))

    criterion = DecisionCriterion.MAX_BELIEF
    if "criterion" in data:
        name = _require(data, "criterion", str, "")
        try:
            criterion = DecisionCriterion(name.strip().lower())
        except ValueError:
            raise ConfigError(
                "criterion: unknown criterion %r (choose from %s)"
                % (name, ", ".join(c.value for c in DecisionCriterion))
            ) from None

    try:
        return MonteCarloConfig(
            scenario=scenario,
            confusion=confusion,
            rules=rules,
            runs=_require(data, "runs", int, ""),
            master_seed=_require(data, "master_seed", int, ""),
            criterion=criterion,
        )
    except EvidenceError as exc:
        raise ConfigError(str(exc)) from exc


def load_simulation_config(path: str) -> MonteCarloConfig:
    return simulation_config_from_json(_load_json(path))


def simulation_config_to_json(cfg: MonteCarloConfig) -> dict:
    return {
        "frame": list(cfg.frame.labels),
        "confusion": [list(row) for row in cfg.confusion.rows],
        "segments": [[label, duration] for label, duration in cfg.scenario.segments],
        "runs": cfg.runs,
        "master_seed": cfg.master_seed,
        "rules": [rule_config_to_json(rule) for rule in cfg.rules],
        "criterion": cfg.criterion.value,
    }


def load_declarations(path: str, frame: Frame) -> list[str]:
    """One declared label per line; blank lines are skipped."""
    declarations = []
    with open(path, "r", encoding="utf-8") as handle:
        for number, line in enumerate(handle, start=1):
            label = line.strip()
            if not label:
                continue
            if label not in frame.labels:
                raise ConfigError(
                    "%s, line %d: unknown label %r (frame is %s)"
                    % (path, number, label, list(frame.labels))
                )
            declarations.append(label)
    if not declarations:
        raise ConfigError("%s: no declarations found" % path)
    return declarations


def _load_json(path: str) -> object:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise ConfigError("%s: invalid JSON (%s)" % (path, exc)) from exc


# ---------------------------------------------------------------------------
# CSV / plot-data output formats
# ---------------------------------------------------------------------------

def sanitize_column(name: str) -> str:
    """Replace every non-alphanumeric character with an underscore."""
    return re.sub(r"[^0-9A-Za-z]", "_", name)


def _subset_columns(frame: Frame) -> tuple[list[int], list[str], str]:
    """Nonempty subsets in canonical order, their column names, and the mapping comment."""
    subsets = list(frame.nonempty_subsets())
    names = ["m_" + sanitize_column(frame.format_subset(bits)) for bits in subsets]
    mapping = ", ".join(
        "%s = %s" % (name, frame.format_subset(bits)) for name, bits in zip(names, subsets)
    )
    return subsets, names, "# columns: %s" % mapping


def format_mass(value: float) -> str:
    return format(value, _MASS_DIGITS)


def track_records_to_csv(records: Sequence[TrackRecord], frame: Frame) -> str:
    """Trace CSV: scan, declared, decision, then one mass column per subset."""
    subsets, names, comment = _subset_columns(frame)
    out = io.StringIO()
    out.write(comment + "\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["scan", "declared", "decision"] + names)
    for record in records:
        row = [str(record.scan), record.declared, record.decision]
        row += [format_mass(record.posterior.masses.get(bits, 0.0)) for bits in subsets]
        writer.writerow(row)
    return out.getvalue()


def traces_to_csv(cfg: MonteCarloConfig, traces: Sequence[AveragedTrace]) -> str:
    """Averaged-trace CSV, one row per (rule, scan), in rule order then scan."""
    frame = cfg.frame
    subsets, names, comment = _subset_columns(frame)
    truth = cfg.scenario.expand()
    out = io.StringIO()
    out.write(comment + "\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["rule", "tnorm", "tconorm", "scan", "true_type"] + names + ["correct_rate"])
    for trace in traces:
        rule = trace.rule
        tnorm = rule.tnorm.value if rule.tnorm is not None else ""
        tconorm = rule.tconorm.value if rule.tconorm is not None else ""
        for k, true_type in enumerate(truth):
            row = [rule.rule.value, tnorm, tconorm, str(k + 1), true_type]
            row += [format_mass(trace.mean_masses[k, bits - 1]) for bits in subsets]
            row.append(format_mass(trace.correct_rate[k]))
            writer.writerow(row)
    return out.getvalue()


def rule_file_tag(cfg: RuleConfig) -> str:
    """Filesystem-safe tag for one rule configuration."""
    if cfg.rule is Rule.TCN:
        return "tcn_%s_%s" % (cfg.tnorm.value, cfg.tconorm.value)
    return cfg.rule.value


def trace_plot_data(trace: AveragedTrace) -> str:
    """Gnuplot-ready columns: scan, then the mean mass of every singleton."""
    frame = trace.frame
    header = "# scan " + " ".join("m_" + sanitize_column(label) for label in frame.labels)
    lines = [header]
    for k in range(trace.mean_masses.shape[0]):
        values = [format_mass(trace.mean_masses[k, frame.singleton(label) - 1]) for label in frame.labels]
        lines.append("%d %s" % (k + 1, " ".join(values)))
    return "\n".join(lines) + "\n"
