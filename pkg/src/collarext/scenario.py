"""Scenario configuration: a flat key = value format with sections.

Grammar, line by line:

* blank lines and lines starting with ``#`` are ignored
* ``[section]`` opens a section
* ``key = value`` assigns inside the current section
* nothing else is legal; keys may not repeat within a section

Every key is checked against the schema of the scenario kind, so a
typo fails with the offending line number instead of being silently
ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ConfigError
from .reports import BoundSpec

SCENARIO_KINDS = (
    "curvature",
    "extend_convexify",
    "extend_negative_sect",
    "extend_lohkamp",
    "completeness",
    "obstruction",
)

PHI_FAMILIES = ("log_barrier", "linear", "inverse_power")

_SECTION_RE = re.compile(r"^\[([A-Za-z_][A-Za-z0-9_]*)\]$")
_KEY_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

# model/group parameter keys and how to convert them
_MODEL_PARAM_TYPES = {
    "radius": "float",
    "half": "float",
    "m": "int",
    "rank": "int",
}

# per kind: section -> key -> (type tag, default, required)
# the special tag "model" and "group" sections are handled separately
_SCHEMAS: dict[str, dict[str, dict[str, tuple]]] = {
    "curvature": {
        "model": {},
        "verify": {
            "bounds": ("str", None, True),
            "resolution": ("int", 17, False),
            "plane_samples": ("int", 4, False),
            "fd_step": ("float", None, False),
            "margin": ("float", None, False),
        },
    },
    "extend_convexify": {
        "model": {},
        "extend": {
            "k_start": ("float", 1.0, False),
            "s_resolution": ("int", 32, False),
            "x_resolution": ("int", 5, False),
        },
    },
    "extend_negative_sect": {
        "model": {},
        "extend": {
            "s_star": ("float", None, True),
            "n_points": ("int", 125, False),
            "n_planes": ("int", 8, False),
            "check_base": ("bool", True, False),
        },
    },
    "extend_lohkamp": {
        "model": {},
        "extend": {
            "target": ("float", None, True),
            "mode": ("str", "ricci", False),
            "annulus_lo": ("float", 2.0, False),
            "annulus_hi": ("float", 4.0, False),
        },
    },
    "completeness": {
        "profile": {
            "phi": ("str", None, True),
            "s_star": ("float", None, True),
            "amplitude": ("float", 1.0, False),
            "exponent": ("float", 1.0, False),
        },
    },
    "obstruction": {
        "group": {},
        "analysis": {
            "r_max": ("int", None, True),
            "fit": ("bool", True, False),
            "entropy": ("bool", True, False),
            "svarc_alpha": ("float", None, False),
            "svarc_beta": ("float", None, False),
            "svarc_dim": ("int", 3, False),
        },
    },
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario description, ready for the runner."""

    kind: str
    seed: int
    model: str | None
    model_params: dict
    options: dict
    output_dir: str
    source: str | None = None
    echo: tuple[str, ...] = field(default=())


def _parse_lines(text: str):
    """Raw sections as {section: {key: (value, line_number)}}."""
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _SECTION_RE.match(line)
        if m:
            current = m.group(1)
            if current in sections:
                raise ConfigError(
                    f"section [{current}] appears twice", line=lineno
                )
            sections[current] = {}
            continue
        if "=" not in line:
            raise ConfigError(
                "expected 'key = value' or '[section]'", line=lineno
            )
        if current is None:
            raise ConfigError(
                "assignment before any [section] header", line=lineno
            )
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not _KEY_RE.match(key):
            raise ConfigError(f"bad key name {key!r}", line=lineno)
        if not value:
            raise ConfigError(f"key {key!r} has an empty value", line=lineno)
        if key in sections[current]:
            raise ConfigError(
                f"key {key!r} repeated in [{current}]", line=lineno
            )
        sections[current][key] = (value, lineno)
    return sections


def _convert(tag: str, raw: str, line: int, key: str):
    if tag == "str":
        return raw
    if tag == "int":
        try:
            return int(raw, 10)
        except ValueError:
            raise ConfigError(
                f"key {key!r} needs an integer, got {raw!r}",
                line=line,
                field=key,
            ) from None
    if tag == "float":
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(
                f"key {key!r} needs a number, got {raw!r}",
                line=line,
                field=key,
            ) from None
    if tag == "bool":
        low = raw.lower()
        if low in ("true", "yes", "1", "on"):
            return True
        if low in ("false", "no", "0", "off"):
            return False
        raise ConfigError(
            f"key {key!r} needs true/false, got {raw!r}", line=line, field=key
        )
    raise ConfigError(f"internal schema tag {tag!r}")


def _take_section(sections, name):
    return dict(sections.pop(name, {}))


def _validate_plain(section_name, entries, schema, out, echo):
    for key, (tag, default, required) in schema.items():
        if key in entries:
            raw, line = entries.pop(key)
            out[key] = _convert(tag, raw, line, key)
        elif required:
            raise ConfigError(
                f"missing required key {key!r} in [{section_name}]", field=key
            )
        else:
            out[key] = default
        if out[key] is not None:
            echo.append(f"{section_name}.{key} = {out[key]}")
    for key, (_, line) in entries.items():
        raise ConfigError(
            f"unknown key {key!r} in [{section_name}]", line=line, field=key
        )


def _validate_named_section(section_name, entries, echo):
    """[model] and [group] sections: a name plus typed parameters."""
    if "name" not in entries:
        raise ConfigError(
            f"missing required key 'name' in [{section_name}]", field="name"
        )
    raw, line = entries.pop("name")
    name = raw
    echo.append(f"{section_name}.name = {name}")
    params = {}
    for key, (raw, line) in sorted(entries.items()):
        if key not in _MODEL_PARAM_TYPES:
            raise ConfigError(
                f"unknown key {key!r} in [{section_name}]",
                line=line,
                field=key,
            )
        params[key] = _convert(_MODEL_PARAM_TYPES[key], raw, line, key)
        echo.append(f"{section_name}.{key} = {params[key]}")
    return name, params


def parse_scenario(text: str, source: str | None = None) -> ScenarioConfig:
    """Parse and validate a scenario config from text."""
    sections = _parse_lines(text)

    scenario = _take_section(sections, "scenario")
    if "kind" not in scenario:
        raise ConfigError("missing required key 'kind' in [scenario]", field="kind")
    kind_raw, kind_line = scenario.pop("kind")
    if kind_raw not in SCENARIO_KINDS:
        raise ConfigError(
            f"unknown scenario kind {kind_raw!r} "
            f"(known: {', '.join(SCENARIO_KINDS)})",
            line=kind_line,
            field="kind",
        )
    kind = kind_raw
    echo = [f"scenario.kind = {kind}"]
    seed = 0
    if "seed" in scenario:
        raw, line = scenario.pop("seed")
        seed = _convert("int", raw, line, "seed")
    echo.append(f"scenario.seed = {seed}")
    for key, (_, line) in scenario.items():
        raise ConfigError(f"unknown key {key!r} in [scenario]", line=line, field=key)

    schema = _SCHEMAS[kind]
    model = None
    model_params: dict = {}
    options: dict = {}
    for section_name, section_schema in schema.items():
        entries = _take_section(sections, section_name)
        if section_name in ("model", "group"):
            if not entries:
                raise ConfigError(f"missing required section [{section_name}]")
            model, model_params = _validate_named_section(
                section_name, entries, echo
            )
        else:
            _validate_plain(section_name, entries, section_schema, options, echo)

    output = _take_section(sections, "output")
    output_dir = "out"
    if "dir" in output:
        raw, line = output.pop("dir")
        output_dir = raw
    echo.append(f"output.dir = {output_dir}")
    for key, (_, line) in output.items():
        raise ConfigError(f"unknown key {key!r} in [output]", line=line, field=key)

    for section_name, entries in sections.items():
        first_line = min(line for _, line in entries.values()) if entries else None
        raise ConfigError(
            f"section [{section_name}] is not used by scenario kind {kind!r}",
            line=first_line,
        )

    _check_kind_options(kind, options)

    return ScenarioConfig(
        kind=kind,
        seed=seed,
        model=model,
        model_params=model_params,
        options=options,
        output_dir=output_dir,
        source=source,
        echo=tuple(echo),
    )


def _check_kind_options(kind: str, options: dict):
    """Cross-field validation that the flat schema cannot express."""
    if kind == "curvature":
        specs = []
        for part in options["bounds"].split(";"):
            part = part.strip()
            if not part:
                continue
            try:
                specs.append(BoundSpec.parse(part))
            except ValueError as exc:
                raise ConfigError(str(exc), field="bounds") from None
        if not specs:
            raise ConfigError("bounds must contain at least one spec", field="bounds")
        options["bound_specs"] = tuple(specs)
        if options["resolution"] < 3:
            raise ConfigError("resolution must be at least 3", field="resolution")
        if options["plane_samples"] < 1:
            raise ConfigError("plane_samples must be at least 1", field="plane_samples")
    elif kind == "extend_convexify":
        if options["k_start"] <= 0:
            raise ConfigError("k_start must be positive", field="k_start")
    elif kind == "extend_negative_sect":
        if options["s_star"] <= 0:
            raise ConfigError("s_star must be positive", field="s_star")
    elif kind == "extend_lohkamp":
        if options["target"] >= 0:
            raise ConfigError(
                "target must be negative (a lower bound to push under)",
                field="target",
            )
        if options["mode"] not in ("ricci", "scalar"):
            raise ConfigError(
                f"mode must be 'ricci' or 'scalar', got {options['mode']!r}",
                field="mode",
            )
        if not options["annulus_lo"] < options["annulus_hi"]:
            raise ConfigError("annulus_lo must be below annulus_hi", field="annulus_lo")
    elif kind == "completeness":
        if options["phi"] not in PHI_FAMILIES:
            raise ConfigError(
                f"phi must be one of {', '.join(PHI_FAMILIES)}", field="phi"
            )
        if options["s_star"] <= 0:
            raise ConfigError("s_star must be positive", field="s_star")
        if options["amplitude"] <= 0:
            raise ConfigError("amplitude must be positive", field="amplitude")
        if options["exponent"] <= 0:
            raise ConfigError("exponent must be positive", field="exponent")
    elif kind == "obstruction":
        if options["r_max"] < 1:
            raise ConfigError("r_max must be at least 1", field="r_max")
        if options["fit"] and options["r_max"] < 6:
            raise ConfigError(
                "growth order fit needs r_max >= 6; disable fit or raise r_max",
                field="r_max",
            )
        if options["entropy"] and options["r_max"] < 3:
            raise ConfigError(
                "entropy estimate needs r_max >= 3; disable entropy or raise r_max",
                field="r_max",
            )
        has_alpha = options["svarc_alpha"] is not None
        has_beta = options["svarc_beta"] is not None
        if has_alpha != has_beta:
            raise ConfigError(
                "svarc_alpha and svarc_beta must be given together",
                field="svarc_alpha",
            )
        if has_alpha and (
            options["svarc_alpha"] <= 0 or options["svarc_beta"] <= 0
        ):
            raise ConfigError("svarc constants must be positive", field="svarc_alpha")
        if options["svarc_dim"] < 1:
            raise ConfigError("svarc_dim must be at least 1", field="svarc_dim")


def load_scenario(path: str) -> ScenarioConfig:
    """Read and validate a scenario config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    return parse_scenario(text, source=path)
