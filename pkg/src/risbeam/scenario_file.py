"""INI-style scenario files.

Sections are ``[scenario]``, ``[geometry]``, ``[grid]``, ``[ap_path.i]``,
``[ue_path.i]``, ``[element_model]``, ``[feedback]`` and ``[pattern]``.
Angles are written in degrees and converted to radians on load.
"""

import cmath
import configparser
from importlib import resources
import math
import os

from ._validation import ScenarioError
from .channel import PropagationPath, SubcarrierGrid
from .element_model import ElementResponseModel
from .experiments import FeedbackSettings, PatternSettings, Scenario
from .geometry import SPEED_OF_LIGHT, AngularPosition, RisGeometry

PRESETS = ("prototype", "small", "chamber")

_KEYS = {
    "scenario": {"name", "seed"},
    "geometry": {"rows", "cols", "spacing_y", "spacing_z", "wavelength", "frequency", "group_size"},
    "grid": {"center_frequency", "bandwidth", "count", "frequencies"},
    "path": {"gain", "phase_deg", "zenith_deg", "azimuth_deg", "delay"},
    "element_model": {"mode", "phase_range_table", "amplitude_ripple_db"},
    "feedback": {"quantization_step_db", "noise_std_db", "seed"},
    "pattern": {"target_azimuth_deg", "target_zenith_deg", "start_deg", "stop_deg", "step_deg"},
}


class ScenarioParseError(ValueError):
    """The scenario file is missing or not syntactically readable."""


def _num(section, key, kind=float, default=None):
    if key not in section:
        if default is None:
            raise ScenarioError(f"[{section.name}] is missing required key {key!r}")
        return default
    raw = section[key].strip()
    try:
        return kind(float(raw)) if kind is int else kind(raw)
    except ValueError:
        raise ScenarioParseError(f"[{section.name}] {key} = {raw!r} is not a number") from None


def _check_keys(name, section, allowed):
    unknown = set(section) - allowed
    if unknown:
        raise ScenarioError(f"[{name}] has unknown keys: {', '.join(sorted(unknown))}")


def _paths(parser, role):
    sections = [s for s in parser.sections() if s.startswith(role + ".")]
    sections.sort(key=lambda s: int(s.split(".", 1)[1]) if s.split(".", 1)[1].isdigit() else math.inf)
    paths = []
    for name in sections:
        sec = parser[name]
        _check_keys(name, sec, _KEYS["path"])
        gain = cmath.rect(_num(sec, "gain", default=1.0), math.radians(_num(sec, "phase_deg", default=0.0)))
        direction = AngularPosition.from_degrees(_num(sec, "zenith_deg"), _num(sec, "azimuth_deg"))
        paths.append(PropagationPath(gain, direction, _num(sec, "delay", default=0.0)))
    return paths


def _table(raw):
    pairs = []
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            angle, span = item.split(":")
            pairs.append((float(angle), float(span)))
        except ValueError:
            raise ScenarioParseError(f"bad phase_range_table entry {item!r}; expected angle:span") from None
    return tuple(pairs)


def parse_scenario(text, name=""):
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ScenarioParseError(f"cannot parse scenario: {exc}") from None

    for sec in parser.sections():
        base, _, suffix = sec.partition(".")
        if base in ("ap_path", "ue_path") and suffix:
            continue
        if suffix or base not in _KEYS or base == "path":
            raise ScenarioError(f"unknown section [{sec}]")
        _check_keys(sec, parser[sec], _KEYS[base])
    if not parser.has_section("geometry"):
        raise ScenarioError("scenario needs a [geometry] section")

    meta = parser["scenario"] if parser.has_section("scenario") else {}
    geo = parser["geometry"]
    if "wavelength" in geo:
        wavelength = _num(geo, "wavelength")
    else:
        wavelength = SPEED_OF_LIGHT / _num(geo, "frequency", default=5.8e9)
    geometry = RisGeometry(
        _num(geo, "rows", int), _num(geo, "cols", int), _num(geo, "spacing_y"), _num(geo, "spacing_z"), wavelength
    )
    group = _num(geo, "group_size", int, default=0) or None

    if parser.has_section("grid"):
        g = parser["grid"]
        if "frequencies" in g:
            try:
                freqs = tuple(float(f) for f in g["frequencies"].split(",") if f.strip())
            except ValueError:
                raise ScenarioParseError("[grid] frequencies must be a comma-separated list") from None
            grid = SubcarrierGrid(freqs)
        else:
            grid = SubcarrierGrid.centered(
                _num(g, "center_frequency", default=5.8e9), _num(g, "bandwidth", default=20e6), _num(g, "count", int, default=64)
            )
    else:
        grid = SubcarrierGrid.centered()

    if parser.has_section("element_model"):
        em = parser["element_model"]
        kwargs = {"mode": em.get("mode", "ideal_1bit").strip()}
        if "phase_range_table" in em:
            kwargs["phase_range_table"] = _table(em["phase_range_table"])
        kwargs["amplitude_ripple_db"] = _num(em, "amplitude_ripple_db", default=0.0)
        model = ElementResponseModel(**kwargs)
    else:
        model = ElementResponseModel()

    if parser.has_section("feedback"):
        fb = parser["feedback"]
        feedback = FeedbackSettings(
            _num(fb, "quantization_step_db", default=0.0), _num(fb, "noise_std_db", default=0.0), _num(fb, "seed", int, default=0)
        )
    else:
        feedback = FeedbackSettings()

    pattern = PatternSettings()
    if parser.has_section("pattern"):
        ps = parser["pattern"]
        pattern = PatternSettings(**{k: _num(ps, k) for k in ps})

    return Scenario(
        geometry,
        _paths(parser, "ap_path"),
        _paths(parser, "ue_path"),
        grid=grid,
        element_model=model,
        feedback=feedback,
        seed=_num(meta, "seed", int, default=0) if meta else 0,
        group_size=group,
        pattern=pattern,
        name=(meta.get("name", name) if meta else name).strip(),
    )


def load_scenario(source):
    """Load a scenario from a file path or a bundled preset name."""
    source = os.fspath(source)
    if source in PRESETS and not os.path.exists(source):
        text = resources.files("risbeam.presets").joinpath(f"{source}.ini").read_text()
        return parse_scenario(text, source)
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioParseError(f"cannot read scenario {source!r}: {exc.strerror}") from None
    return parse_scenario(text, os.path.splitext(os.path.basename(source))[0])


def _fmt(x):
    return repr(float(x))


def dump_scenario(scenario):
    """Serialize ``scenario`` back to the INI text format."""
    geo = scenario.geometry
    lines = ["[scenario]", f"name = {scenario.name}", f"seed = {scenario.seed}", "",
             "[geometry]", f"rows = {geo.rows_M}", f"cols = {geo.cols_N}",
             f"spacing_y = {_fmt(geo.spacing_y)}", f"spacing_z = {_fmt(geo.spacing_z)}",
             f"wavelength = {_fmt(geo.wavelength)}"]
    if scenario.group_size:
        lines.append(f"group_size = {scenario.group_size}")
    lines += ["", "[grid]", "frequencies = " + ", ".join(_fmt(f) for f in scenario.grid.frequencies)]
    for role, paths in (("ap_path", scenario.ap_paths), ("ue_path", scenario.ue_paths)):
        for i, p in enumerate(paths):
            lines += ["", f"[{role}.{i}]", f"gain = {_fmt(abs(p.complex_gain))}",
                      f"phase_deg = {_fmt(math.degrees(math.atan2(p.complex_gain.imag, p.complex_gain.real)))}",
                      f"zenith_deg = {_fmt(math.degrees(p.direction.zenith_theta))}",
                      f"azimuth_deg = {_fmt(math.degrees(p.direction.azimuth_phi))}",
                      f"delay = {_fmt(p.delay)}"]
    em = scenario.element_model
    lines += ["", "[element_model]", f"mode = {em.mode}",
              "phase_range_table = " + ", ".join(f"{a:g}:{s:g}" for a, s in em.phase_range_table),
              f"amplitude_ripple_db = {_fmt(em.amplitude_ripple_db)}"]
    fb = scenario.feedback
    lines += ["", "[feedback]", f"quantization_step_db = {_fmt(fb.quantization_step_db)}",
              f"noise_std_db = {_fmt(fb.noise_std_db)}", f"seed = {fb.seed}"]
    ps = scenario.pattern
    lines += ["", "[pattern]"] + [f"{k} = {_fmt(getattr(ps, k))}" for k in
                                  ("target_azimuth_deg", "target_zenith_deg", "start_deg", "stop_deg", "step_deg")]
    return "\n".join(lines) + "\n"
