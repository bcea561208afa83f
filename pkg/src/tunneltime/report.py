"""
Parameter sweeps and reproducible CSV/JSON emission.

Tables are labeled (row axis) x (column axis) grids of scalars with an
optional per-cell flag (spectral regime, divergence sentinel).  Output
is bit-stable across runs: floats are written with shortest round-trip
repr, +infinity as the literal string "inf", and flagged cells carry a
paired flag column ("*" marks a fully distorted cell).  Loaders invert
both formats losslessly.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .barrier import BarrierSpec, phase_derivative, phase_time, transmission_modulus, transmission_phase
from .packets import ComplexField, FieldAxis
from .spectrum import PacketSpec, SpectralRegime, find_kmax

__all__ = [
    "Axis",
    "SweepTable",
    "DEFAULT_WA_VALUES",
    "DEFAULT_LA_VALUES",
    "FLAG_FULLY_DISTORTED",
    "FLAG_BOUNDARY_LOCAL_MAX",
    "FLAG_DIVERGENT",
    "generate_kmax_table",
    "sweep_phase_time",
    "transmission_table",
    "emit",
    "dumps",
    "load_table_csv",
    "load_table_json",
    "load_field_csv",
    "load_field_json",
]

# Default sweep axes: barrier strengths and extensions in packet-width units.
DEFAULT_WA_VALUES: tuple[float, ...] = (1.5, 2.0, 4.0, 6.0, 8.0, 10.0, 20.0)
DEFAULT_LA_VALUES: tuple[float, ...] = tuple(i / 20 for i in range(21))

FLAG_FULLY_DISTORTED = "*"
FLAG_BOUNDARY_LOCAL_MAX = "local-max"
FLAG_DIVERGENT = "divergent"

_REGIME_FLAGS = {
    SpectralRegime.UNDISTORTED: None,
    SpectralRegime.BOUNDARY_LOCAL_MAX: FLAG_BOUNDARY_LOCAL_MAX,
    SpectralRegime.FULLY_DISTORTED: FLAG_FULLY_DISTORTED,
}


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple

    def labels(self) -> list[str]:
        return [v if isinstance(v, str) else f"{self.name}={_fmt(v)}" for v in self.values]


@dataclass(frozen=True, eq=False)
class SweepTable:
    row_axis: Axis
    col_axis: Axis
    values: np.ndarray
    flags: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        want = (len(self.row_axis.values), len(self.col_axis.values))
        if vals.shape != want:
            raise ValueError(f"values shape {vals.shape} does not match axes {want}")
        flg = np.empty(want, dtype=object)
        flg[:, :] = np.asarray(self.flags, dtype=object)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "flags", flg)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SweepTable):
            return NotImplemented
        return (
            self.row_axis == other.row_axis
            and self.col_axis == other.col_axis
            and self.values.shape == other.values.shape
            and bool(np.all((self.values == other.values) | (np.isnan(self.values) & np.isnan(other.values))))
            and bool(np.all(self.flags == other.flags))
            and self.metadata == other.metadata
        )

    def cell(self, row_value, col_value) -> tuple[float, str | None]:
        i = self.row_axis.values.index(row_value)
        j = self.col_axis.values.index(col_value)
        return float(self.values[i, j]), self.flags[i, j]


def _base_metadata(**extra) -> dict:
    md = {"generator": f"tunneltime {__version__}"}
    md.update(extra)
    return md


def generate_kmax_table(
    wa_values=DEFAULT_WA_VALUES,
    La_values=DEFAULT_LA_VALUES,
    k0a: float = 1.0,
    *,
    m: float = 1.0,
    grid_points: int = 4096,
) -> SweepTable:
    """
    Sweep the modulated-spectrum maximizer k_max * a over barrier
    extension (rows, L/a) and strength (columns, w*a) at fixed k0*a.

    Fully distorted cells (global maximum at the band edge) are flagged
    "*"; boundary-local-maximum cells are flagged "local-max".  Columns
    with w*a <= k0*a are rejected.
    """
    wa_values = tuple(float(v) for v in wa_values)
    La_values = tuple(float(v) for v in La_values)
    if any(wa <= k0a for wa in wa_values):
        raise ValueError(f"every w*a must exceed k0*a = {k0a}")
    if any(La < 0 for La in La_values):
        raise ValueError("L/a values must be >= 0")

    p = PacketSpec(k0=k0a, a=1.0)
    values = np.empty((len(La_values), len(wa_values)))
    flags = np.empty(values.shape, dtype=object)
    for j, wa in enumerate(wa_values):
        for i, La in enumerate(La_values):
            res = find_kmax(p, BarrierSpec(w=wa, L=La, m=m), grid_points=grid_points)
            values[i, j] = res.k_max
            flags[i, j] = _REGIME_FLAGS[res.regime]
    return SweepTable(
        row_axis=Axis("L_over_a", La_values),
        col_axis=Axis("wa", wa_values),
        values=values,
        flags=flags,
        metadata=_base_metadata(table="kmax", k0a=k0a, m=m, a=1.0, grid_points=grid_points),
    )


def sweep_phase_time(
    mode: str,
    grid,
    *,
    policy: str,
    wa: float | None = None,
    La: float | None = None,
    k0a: float = 1.0,
    m: float = 1.0,
    grid_points: int = 4096,
) -> SweepTable:
    """
    Transit-time sweep, one column per call.

    mode = "vs_L" sweeps L/a at fixed w*a; mode = "vs_w" sweeps w*a at
    fixed L/a.  policy = "solved" evaluates the transit time at the
    solved maximizer of the modulated spectrum (cells inherit its
    regime flag); policy = "naive-k0" evaluates it at k0 regardless,
    with the +infinity sentinel (flag "divergent") wherever k0 >= w.
    """
    if mode not in ("vs_L", "vs_w"):
        raise ValueError(f"mode must be 'vs_L' or 'vs_w', got {mode!r}")
    if policy not in ("solved", "naive-k0"):
        raise ValueError(f"policy must be 'solved' or 'naive-k0', got {policy!r}")
    grid = tuple(float(v) for v in grid)
    if mode == "vs_L":
        if wa is None:
            raise ValueError("vs_L sweeps require fixed wa")
        if any(v < 0 for v in grid):
            raise ValueError("L/a grid must be >= 0")
        cells = [(wa, La_i) for La_i in grid]
        row_axis = Axis("L_over_a", grid)
        fixed_meta = {"wa": wa}
    else:
        if La is None:
            raise ValueError("vs_w sweeps require fixed La")
        if any(v <= 0 for v in grid):
            raise ValueError("w*a grid must be > 0")
        cells = [(wa_i, La) for wa_i in grid]
        row_axis = Axis("wa", grid)
        fixed_meta = {"La": La}

    p = PacketSpec(k0=k0a, a=1.0)
    values = np.empty((len(cells), 1))
    flags = np.empty(values.shape, dtype=object)
    for i, (w_i, L_i) in enumerate(cells):
        b = BarrierSpec(w=w_i, L=L_i, m=m)
        if policy == "solved":
            res = find_kmax(p, b, grid_points=grid_points)
            values[i, 0] = phase_time(res.k_max, b)
            flags[i, 0] = _REGIME_FLAGS[res.regime]
        else:
            if k0a >= w_i:
                values[i, 0] = math.inf
                flags[i, 0] = FLAG_DIVERGENT
            else:
                values[i, 0] = phase_time(k0a, b)
                flags[i, 0] = None
    return SweepTable(
        row_axis=row_axis,
        col_axis=Axis("quantity", (f"t_transit[{policy}]",)),
        values=values,
        flags=flags,
        metadata=_base_metadata(table="phase-time-sweep", mode=mode, policy=policy, k0a=k0a, m=m, **fixed_meta),
    )


def transmission_table(b: BarrierSpec, k_grid) -> SweepTable:
    """Transmission modulus, phase, phase derivative, and transit time on a k grid."""
    k = np.asarray(k_grid, dtype=float)
    if k.ndim != 1 or k.size == 0:
        raise ValueError("k grid must be a non-empty 1-D sequence")
    values = np.column_stack(
        [
            np.asarray(transmission_modulus(k, b)),
            np.asarray(transmission_phase(k, b)),
            np.asarray(phase_derivative(k, b)),
            np.asarray(phase_time(k, b)),
        ]
    )
    flags = np.full(values.shape, None, dtype=object)
    return SweepTable(
        row_axis=Axis("k", tuple(float(v) for v in k)),
        col_axis=Axis("quantity", ("T", "Theta", "dTheta_dk", "t_transit")),
        values=values,
        flags=flags,
        metadata=_base_metadata(table="transmission", w=b.w, L=b.L, m=b.m),
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _fmt(v: float) -> str:
    if math.isinf(v):
        return "-inf" if v < 0 else "inf"
    if math.isnan(v):
        return "nan"
    return repr(float(v))


def _parse_scalar(text: str):
    text = text.strip()
    if text in ("inf", "+inf"):
        return math.inf
    if text == "-inf":
        return -math.inf
    if text == "nan":
        return math.nan
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def _json_value(v: float):
    if math.isinf(v) or math.isnan(v):
        return _fmt(v)
    return float(v)


def _table_csv(table: SweepTable) -> str:
    out = io.StringIO()
    for key, val in table.metadata.items():
        out.write(f"# {key} = {val}\n")
    out.write(f"# row_axis = {table.row_axis.name}\n")
    out.write(f"# col_axis = {table.col_axis.name}\n")
    header = [table.row_axis.name]
    for label in table.col_axis.labels():
        header.append(label)
        header.append(f"{label}:flag")
    out.write(",".join(header) + "\n")
    for i, rv in enumerate(table.row_axis.values):
        row = [_fmt(rv)]
        for j in range(len(table.col_axis.values)):
            row.append(_fmt(table.values[i, j]))
            row.append(table.flags[i, j] or "")
        out.write(",".join(row) + "\n")
    return out.getvalue()


def _table_json(table: SweepTable) -> str:
    payload = {
        "type": "sweep_table",
        "metadata": table.metadata,
        "row_axis": {"name": table.row_axis.name, "values": list(table.row_axis.values)},
        "col_axis": {"name": table.col_axis.name, "values": list(table.col_axis.values)},
        "values": [[_json_value(v) for v in row] for row in table.values],
        "flags": [[f for f in row] for row in table.flags],
    }
    return json.dumps(payload, indent=1) + "\n"


def load_table_json(text: str) -> SweepTable:
    payload = json.loads(text)
    if payload.get("type") != "sweep_table":
        raise ValueError("not a sweep_table JSON document")
    values = np.array(
        [[_parse_scalar(v) if isinstance(v, str) else float(v) for v in row] for row in payload["values"]],
        dtype=float,
    )
    flags = np.empty(values.shape, dtype=object)
    for i, row in enumerate(payload["flags"]):
        for j, f in enumerate(row):
            flags[i, j] = f
    return SweepTable(
        row_axis=Axis(payload["row_axis"]["name"], tuple(payload["row_axis"]["values"])),
        col_axis=Axis(payload["col_axis"]["name"], tuple(payload["col_axis"]["values"])),
        values=values,
        flags=flags,
        metadata=payload["metadata"],
    )


def load_table_csv(text: str) -> SweepTable:
    metadata: dict = {}
    rows: list[list[str]] = []
    header: list[str] | None = None
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, val = line[1:].partition("=")
            metadata[key.strip()] = _parse_scalar(val)
            continue
        cells = line.split(",")
        if header is None:
            header = cells
        else:
            rows.append(cells)
    if header is None:
        raise ValueError("CSV table has no header row")
    row_name = metadata.pop("row_axis", header[0])
    col_name = metadata.pop("col_axis", "column")
    labels = header[1::2]
    col_values = []
    for label in labels:
        prefix = f"{col_name}="
        col_values.append(_parse_scalar(label[len(prefix):]) if label.startswith(prefix) else label)
    row_values = tuple(_parse_scalar(r[0]) for r in rows)
    values = np.array([[_parse_scalar(v) for v in r[1::2]] for r in rows], dtype=float)
    flags = np.empty(values.shape, dtype=object)
    for i, r in enumerate(rows):
        for j, f in enumerate(r[2::2]):
            flags[i, j] = f or None
    return SweepTable(
        row_axis=Axis(str(row_name), row_values),
        col_axis=Axis(str(col_name), tuple(col_values)),
        values=values,
        flags=flags,
        metadata=metadata,
    )


def _field_metadata(fld: ComplexField) -> dict:
    md = {
        "generator": f"tunneltime {__version__}",
        "kind": fld.kind,
        "axis": fld.axis.value,
        "fixed": fld.fixed_coordinate,
        "k0": fld.packet.k0,
        "a": fld.packet.a,
    }
    if fld.packet.k_cut is not None:
        md["k_cut"] = fld.packet.k_cut
    if fld.barrier is not None:
        md.update(w=fld.barrier.w, L=fld.barrier.L, m=fld.barrier.m)
    if fld.band is not None:
        md.update(band_lo=fld.band[0], band_hi=fld.band[1])
    return md


def _field_csv(fld: ComplexField) -> str:
    out = io.StringIO()
    for key, val in _field_metadata(fld).items():
        out.write(f"# {key} = {val}\n")
    coord = "x" if fld.axis is FieldAxis.SPACE else "t"
    out.write(f"{coord},re_psi,im_psi,abs2_psi\n")
    for c, amp in zip(fld.coordinates, fld.amplitudes):
        out.write(f"{_fmt(c)},{_fmt(amp.real)},{_fmt(amp.imag)},{_fmt(abs(amp) ** 2)}\n")
    return out.getvalue()


def _field_json(fld: ComplexField) -> str:
    payload = {
        "type": "complex_field",
        "metadata": _field_metadata(fld),
        "coordinates": [_json_value(c) for c in fld.coordinates],
        "re_psi": [_json_value(a.real) for a in fld.amplitudes],
        "im_psi": [_json_value(a.imag) for a in fld.amplitudes],
    }
    return json.dumps(payload, indent=1) + "\n"


def _field_from_parts(metadata: dict, coords, re, im) -> ComplexField:
    packet = PacketSpec(
        k0=float(metadata["k0"]),
        a=float(metadata["a"]),
        k_cut=float(metadata["k_cut"]) if "k_cut" in metadata else None,
    )
    barrier = None
    if "w" in metadata:
        barrier = BarrierSpec(w=float(metadata["w"]), L=float(metadata["L"]), m=float(metadata["m"]))
    band = None
    if "band_lo" in metadata:
        band = (float(metadata["band_lo"]), float(metadata["band_hi"]))
    return ComplexField(
        axis=FieldAxis(metadata["axis"]),
        coordinates=np.asarray(coords, dtype=float),
        amplitudes=np.asarray(re, dtype=float) + 1j * np.asarray(im, dtype=float),
        kind=str(metadata["kind"]),
        fixed_coordinate=float(metadata["fixed"]),
        packet=packet,
        barrier=barrier,
        band=band,
    )


def load_field_json(text: str) -> ComplexField:
    payload = json.loads(text)
    if payload.get("type") != "complex_field":
        raise ValueError("not a complex_field JSON document")
    coords = [_parse_scalar(v) if isinstance(v, str) else v for v in payload["coordinates"]]
    re = [_parse_scalar(v) if isinstance(v, str) else v for v in payload["re_psi"]]
    im = [_parse_scalar(v) if isinstance(v, str) else v for v in payload["im_psi"]]
    return _field_from_parts(payload["metadata"], coords, re, im)


def load_field_csv(text: str) -> ComplexField:
    metadata: dict = {}
    coords: list[float] = []
    re: list[float] = []
    im: list[float] = []
    header_seen = False
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, val = line[1:].partition("=")
            metadata[key.strip()] = _parse_scalar(val)
            continue
        if not header_seen:
            header_seen = True
            continue
        cells = line.split(",")
        coords.append(float(_parse_scalar(cells[0])))
        re.append(float(_parse_scalar(cells[1])))
        im.append(float(_parse_scalar(cells[2])))
    if not header_seen:
        raise ValueError("CSV field has no header row")
    return _field_from_parts(metadata, coords, re, im)


def dumps(obj, format: str) -> str:
    """Serialize a SweepTable or ComplexField to a CSV or JSON string."""
    fmt = format.lower()
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {format!r}")
    if isinstance(obj, SweepTable):
        return _table_csv(obj) if fmt == "csv" else _table_json(obj)
    if isinstance(obj, ComplexField):
        return _field_csv(obj) if fmt == "csv" else _field_json(obj)
    raise TypeError(f"cannot emit object of type {type(obj).__name__}")


def emit(obj, format: str, destination) -> None:
    """
    Write a SweepTable or ComplexField to ``destination`` (path or
    open text file) as CSV or JSON.  Output is byte-stable across runs
    for identical inputs.
    """
    text = dumps(obj, format)
    if hasattr(destination, "write"):
        destination.write(text)
        return
    with open(destination, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
