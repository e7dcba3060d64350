"""Built-in example systems and the JSON system-spec format (version 1)."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path

import numpy as np

from .config import CheckConfig, IntegratorConfig, Tolerances
from .contact import ONE, ContactForm, HamiltonianField
from .errors import ContactKitError, SpecError
from .geomcore import Chart, ScalarField, VectorFieldDef, parse

SPEC_VERSION = 1
TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class SystemDef:
    name: str
    chart: Chart
    alpha: tuple[str, ...]
    fields: dict[str, str] = field(default_factory=dict)
    integrals: tuple[str, ...] = ()
    r: int | None = None
    hamiltonian: str = "1"
    symmetries: dict[str, tuple[str, ...]] = field(default_factory=dict)
    action_angle: dict | None = None
    tolerances: Tolerances = Tolerances()
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(self.alpha))
        object.__setattr__(self, "integrals", tuple(self.integrals))
        object.__setattr__(self, "symmetries", {k: tuple(v) for k, v in self.symmetries.items()})
        d = self.chart.dim
        if len(self.alpha) != d:
            raise SpecError(f"alpha: expected {d} coefficients, got {len(self.alpha)}")
        if d % 2 != 1:
            raise SpecError(f"chart.coords: dimension must be odd, got {d}")
        for name in self.integrals:
            if name not in self.fields:
                raise SpecError(f"integrals: {name!r} is not a defined field")
        if self.hamiltonian != "1" and self.hamiltonian not in self.fields:
            raise SpecError(f"hamiltonian: {self.hamiltonian!r} is not a defined field")
        if self.r is not None and not 0 <= self.r <= self.n:
            raise SpecError(f"r: must lie in [0, n={self.n}], got {self.r}")
        for k, comps in self.symmetries.items():
            if len(comps) != d:
                raise SpecError(f"symmetries.{k}: expected {d} components, got {len(comps)}")
        # parse everything once so bad expressions fail at load time
        try:
            self.contact
            for k in self.fields:
                self.field(k)
            for k in self.symmetries:
                self.symmetry(k)
            if self.action_angle:
                self._check_action_angle()
        except ContactKitError as e:
            raise SpecError(f"{self.name}: {e}") from None

    def _check_action_angle(self):
        aa = self.action_angle
        for key in ("angles", "actions", "y0"):
            if key not in aa:
                raise SpecError(f"action_angle: missing key {key!r}")
        for a in aa["angles"]:
            if a not in self.chart.coords or not self.chart.periodic[self.chart.index(a)]:
                raise SpecError(f"action_angle.angles: {a!r} is not a periodic coordinate")
        if len(aa["angles"]) != len(aa["actions"]) + 1:
            raise SpecError("action_angle: need one more angle than actions")
        parse(aa["y0"], aa["actions"])

    # -- derived objects -----------------------------------------------------

    @property
    def n(self) -> int:
        return (self.chart.dim - 1) // 2

    @property
    def coords(self) -> tuple[str, ...]:
        return self.chart.coords

    @cached_property
    def contact(self) -> ContactForm:
        return ContactForm.from_exprs(self.alpha, self.coords)

    def field(self, name: str) -> ScalarField:
        cache = self.__dict__.setdefault("_field_cache", {})
        if name not in cache:
            if name not in self.fields:
                raise SpecError(f"unknown field {name!r}")
            cache[name] = ScalarField(self.fields[name], self.coords, name)
        return cache[name]

    def symmetry(self, name: str) -> VectorFieldDef:
        return VectorFieldDef(self.symmetries[name], self.coords)

    @property
    def integral_fields(self) -> list[ScalarField]:
        return [self.field(k) for k in self.integrals]

    @property
    def hamiltonian_field(self):
        return ONE if self.hamiltonian == "1" else self.field(self.hamiltonian)

    def vector_field(self, name: str | None = None) -> HamiltonianField:
        """X_f for a named scalar field; None or "1" gives the Reeb field."""
        if name in (None, "1"):
            return HamiltonianField(ONE, self.contact)
        if name not in self.fields and name.startswith("X") and name[1:] in self.fields:
            name = name[1:]
        if name not in self.fields:
            raise SpecError(f"unknown field {name!r}")
        return HamiltonianField(self.field(name), self.contact)

    @property
    def angle_indices(self) -> list[int]:
        return [i for i, p in enumerate(self.chart.periodic) if p]

    def samples(self, n: int = 64, seed: int | None = None) -> np.ndarray:
        return self.chart.samples(n, self.seed if seed is None else seed)

    def check_config(self, n: int = 64, seed: int | None = None, integrator: IntegratorConfig | None = None) -> CheckConfig:
        lo, hi = self.chart.flow_bounds()
        return CheckConfig(
            self.samples(n, seed),
            self.tolerances,
            integrator or IntegratorConfig(),
            lo,
            hi,
            seed=self.seed if seed is None else seed,
        )

    def with_integral(self, name: str, expr: str) -> "SystemDef":
        fields = dict(self.fields)
        fields[name] = expr
        return replace(self, fields=fields, integrals=self.integrals + (name,))

    # -- JSON ------------------------------------------------------------------

    def to_dict(self) -> dict:
        out = {
            "version": SPEC_VERSION,
            "name": self.name,
            "chart": {
                "coords": list(self.chart.coords),
                "periodic": list(self.chart.periodic),
                "box": [list(b) for b in self.chart.box],
                "margin": self.chart.margin,
            },
            "alpha": list(self.alpha),
            "fields": dict(self.fields),
            "integrals": list(self.integrals),
            "r": self.r,
            "hamiltonian": self.hamiltonian,
            "tolerances": self.tolerances.to_dict(),
            "seed": self.seed,
        }
        if self.symmetries:
            out["symmetries"] = {k: list(v) for k, v in self.symmetries.items()}
        if self.action_angle:
            out["action_angle"] = {k: (list(v) if isinstance(v, (list, tuple)) else v) for k, v in self.action_angle.items()}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _need(d: dict, key: str, path: str):
    if not isinstance(d, dict):
        raise SpecError(f"{path}: expected an object")
    if key not in d:
        raise SpecError(f"{path}: missing key {key!r}")
    return d[key]


def from_dict(doc: dict, name: str = "spec") -> SystemDef:
    """Validate and build a SystemDef from a version-1 spec document."""
    if not isinstance(doc, dict):
        raise SpecError("$: expected a JSON object")
    version = _need(doc, "version", "$")
    if version != SPEC_VERSION:
        raise SpecError(f"$.version: unsupported version {version!r}")
    ch = _need(doc, "chart", "$")
    coords = _need(ch, "coords", "$.chart")
    periodic = ch.get("periodic", [False] * len(coords))
    box = _need(ch, "box", "$.chart")
    try:
        chart = Chart(tuple(coords), tuple(periodic), tuple(tuple(b) for b in box), float(ch.get("margin", 0.05)))
    except (TypeError, ValueError) as e:
        raise SpecError(f"$.chart: {e}") from None
    alpha = _need(doc, "alpha", "$")
    if not isinstance(alpha, list) or not all(isinstance(a, str) for a in alpha):
        raise SpecError("$.alpha: expected a list of expression strings")
    tol = doc.get("tolerances", {}) or {}
    try:
        tolerances = Tolerances().updated(**tol)
    except (TypeError, ValueError) as e:
        raise SpecError(f"$.tolerances: {e}") from None
    r = doc.get("r")
    if r is not None and not isinstance(r, int):
        raise SpecError("$.r: expected an integer")
    return SystemDef(
        name=str(doc.get("name", name)),
        chart=chart,
        alpha=tuple(alpha),
        fields=dict(doc.get("fields", {}) or {}),
        integrals=tuple(doc.get("integrals", []) or []),
        r=r,
        hamiltonian=str(doc.get("hamiltonian", "1")),
        symmetries=dict(doc.get("symmetries", {}) or {}),
        action_angle=doc.get("action_angle"),
        tolerances=tolerances,
        seed=int(doc.get("seed", 0)),
    )


def from_json(text: str, name: str = "spec") -> SystemDef:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"$: invalid JSON ({e})") from None
    return from_dict(doc, name)


def load(path) -> SystemDef:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise SpecError(f"{p}: {e.strerror}") from None
    try:
        return from_json(text, p.stem)
    except SpecError as e:
        raise SpecError(f"{p}: {e}") from None


# -- builtins -------------------------------------------------------------------


def canonical_system(r: int, s: int, y0_expr: str, g_exprs, name: str | None = None,
                     y_box=(0.25, 1.5), x_box=(-1.0, 1.0)) -> SystemDef:
    """alpha_0 = y0 dth0 + sum y_i dth_i + sum g_a dx_a on (th0..thr, y1..yr, x1..x2s)."""
    g_exprs = list(g_exprs)
    if len(g_exprs) != 2 * s:
        raise SpecError(f"need {2 * s} g expressions, got {len(g_exprs)}")
    angles = [f"th{i}" for i in range(r + 1)]
    ys = [f"y{i}" for i in range(1, r + 1)]
    xs = [f"x{i}" for i in range(1, 2 * s + 1)]
    coords = angles + ys + xs
    chart = Chart(
        tuple(coords),
        tuple([True] * len(angles) + [False] * (len(ys) + len(xs))),
        tuple([(0.0, TWO_PI)] * len(angles) + [tuple(y_box)] * len(ys) + [tuple(x_box)] * len(xs)),
    )
    alpha = [y0_expr] + ys + ["0"] * len(ys) + g_exprs
    fields = {y: y for y in ys}
    fields["y0"] = y0_expr
    fields.update({x: x for x in xs})
    integrals = ys + xs
    unit = lambda k: ["1" if j == k else "0" for j in range(len(coords))]
    return SystemDef(
        name=name or f"canonical_r{r}s{s}",
        chart=chart,
        alpha=tuple(alpha),
        fields=fields,
        integrals=tuple(integrals),
        r=r,
        symmetries={f"d{a}": tuple(unit(k)) for k, a in enumerate(angles)},
        action_angle={"angles": angles, "actions": ys, "y0": y0_expr},
    )


def _darboux3() -> SystemDef:
    return SystemDef(
        name="darboux3",
        chart=Chart(("q", "p", "z"), (False,) * 3, ((-2.0, 2.0),) * 3),
        alpha=("p", "0", "1"),
        fields={"q": "q", "p": "p", "z": "z"},
        symmetries={"dq": ("1", "0", "0")},
    )


def _darboux5() -> SystemDef:
    coords = ("q1", "q2", "p1", "p2", "z")
    return SystemDef(
        name="darboux5",
        chart=Chart(coords, (False,) * 5, ((-2.0, 2.0),) * 5),
        alpha=("p1", "p2", "0", "0", "1"),
        fields={c: c for c in coords},
        symmetries={"dq1": ("1", "0", "0", "0", "0"), "dq2": ("0", "1", "0", "0", "0")},
    )


def _hopf_s3() -> SystemDef:
    return SystemDef(
        name="hopf_s3",
        chart=Chart(("u", "th1", "th2"), (False, True, True), ((0.0, math.pi / 2), (0.0, TWO_PI), (0.0, TWO_PI))),
        alpha=("0", "cos(u)^2", "sin(u)^2"),
        fields={"f1": "cos(u)^2", "u": "u", "th1": "th1", "th2": "th2"},
        integrals=("f1",),
        r=1,
        symmetries={"dth1": ("0", "1", "0"), "dth2": ("0", "0", "1")},
        action_angle={"angles": ["th1", "th2"], "actions": ["y1"], "y0": "1 - y1"},
    )


# Unit cosphere bundle of the round S^2 in (phi, th, psi): the covector with
# p_th = cos(psi), p_phi = sin(psi) sin(th), i.e. unit velocity
# cos(psi) e_th + sin(psi) e_phi.  Angular momentum L = x cross v.
SPHERE_LX = "-cos(psi)*sin(phi) - sin(psi)*cos(th)*cos(phi)"
SPHERE_LY = "cos(psi)*cos(phi) - sin(psi)*cos(th)*sin(phi)"
SPHERE_LZ = "sin(psi)*sin(th)"


def _sphere_geodesic() -> SystemDef:
    return SystemDef(
        name="sphere_geodesic",
        chart=Chart(("phi", "th", "psi"), (True, False, True), ((0.0, TWO_PI), (0.0, math.pi), (0.0, TWO_PI))),
        alpha=("sin(psi)*sin(th)", "cos(psi)", "0"),
        fields={"Lz": SPHERE_LZ, "Lx": SPHERE_LX, "Ly": SPHERE_LY},
        integrals=("Lz", "Lx"),
        r=0,
    )


BUILTINS = {
    "darboux3": _darboux3,
    "darboux5": _darboux5,
    "canonical_r1s0": lambda: canonical_system(1, 0, "1 - y1^2", []),
    "canonical_r1s1": lambda: canonical_system(1, 1, "1 - y1^2", ["x2", "0"]),
    "hopf_s3": _hopf_s3,
    "sphere_geodesic": _sphere_geodesic,
}


def builtin(name: str) -> SystemDef:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise SpecError(f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}") from None


def random_scalar_field(coords, rng: np.random.Generator, name: str | None = None) -> ScalarField:
    """(degree <= 2 polynomial) * (sin or cos of a linear form), random coefficients."""
    coords = list(coords)

    def coef():
        return round(float(rng.uniform(-1, 1)), 3)

    def signed(terms):
        out = ""
        for c, t in terms:
            mag = f"{abs(c):g}" + (f"*{t}" if t else "")
            out += (" - " if c < 0 else " + ") + mag if out else ("-" if c < 0 else "") + mag
        return out or "0"

    mono = [(coef(), "")] + [(coef(), x) for x in coords]
    for i, xi in enumerate(coords):
        for xj in coords[i:]:
            if rng.random() < 0.5:
                mono.append((coef(), f"{xi}*{xj}"))
    lin = [(coef(), x) for x in coords] + [(coef(), "")]
    trig = "sin" if rng.random() < 0.5 else "cos"
    return ScalarField(f"({signed(mono)})*{trig}({signed(lin)})", coords, name)
