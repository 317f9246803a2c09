"""Transaction ingestion and feature engineering.

Parses card-transaction records, derives stable customer keys, engineers
the tabular feature set (amount, calendar one-hots, geography, and either
a category one-hot block or customer-embedding coordinates), and provides
a deterministic synthetic-data generator with planted collusion rings for
benchmarks and tests.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import ConfigError, DomainError, FormatError, SchemaError
from .hashing import fnv1a_64, fnv1a_64_hex


class TimeBin(Enum):
    """Six-hour slice of the day; intervals are half-open on the right."""

    H06_12 = "06_12"
    H12_18 = "12_18"
    H18_00 = "18_00"
    H00_06 = "00_06"


class Continent(Enum):
    """Coarse continent label; listing order fixes one-hot column order."""

    AFRICA = "africa"
    ASIA = "asia"
    EUROPE = "europe"
    NORTH_AMERICA = "north_america"
    SOUTH_AMERICA = "south_america"
    OCEANIA = "oceania"
    ANTARCTICA = "antarctica"
    UNKNOWN = "unknown"


# Bounding boxes checked in this order; first match wins.  The order
# differs from the enum listing so that overlapping boxes resolve to the
# intuitive label (e.g. the Mediterranean rim prefers Europe over Asia).
# Points matching no box map to UNKNOWN.
_CONTINENT_BOXES: tuple[tuple[Continent, float, float, float, float], ...] = (
    (Continent.ANTARCTICA, -90.0, -60.0, -180.0, 180.0),
    (Continent.OCEANIA, -50.0, 0.0, 110.0, 180.0),
    (Continent.NORTH_AMERICA, 7.0, 84.0, -168.0, -52.0),
    (Continent.SOUTH_AMERICA, -56.0, 13.0, -82.0, -34.0),
    (Continent.EUROPE, 36.0, 71.0, -10.0, 40.0),
    (Continent.AFRICA, -35.0, 37.0, -18.0, 52.0),
    (Continent.ASIA, 0.0, 77.0, 26.0, 180.0),
)


@dataclass(frozen=True)
class RawTransaction:
    """One parsed card transaction.

    Invariants are enforced at construction: finite non-negative amount,
    gender in {"F", "M"}, latitudes in [-90, 90], longitudes in
    [-180, 180].
    """

    timestamp: datetime
    category: str
    amount: float
    first_name: str
    last_name: str
    gender: str
    job: str
    date_of_birth: str
    home_address: str
    customer_lat: float
    customer_lon: float
    merchant_lat: float
    merchant_lon: float
    is_fraud: bool

    def __post_init__(self):
        if not math.isfinite(self.amount) or self.amount < 0:
            raise DomainError(f"amount must be finite and >= 0, got {self.amount}")
        if self.gender not in ("F", "M"):
            raise DomainError(f"gender must be 'F' or 'M', got {self.gender!r}")
        if not self.category:
            raise DomainError("category must be non-empty")
        for name, lat in (("customer_lat", self.customer_lat), ("merchant_lat", self.merchant_lat)):
            if not math.isfinite(lat) or not -90.0 <= lat <= 90.0:
                raise DomainError(f"{name} must lie in [-90, 90], got {lat}")
        for name, lon in (("customer_lon", self.customer_lon), ("merchant_lon", self.merchant_lon)):
            if not math.isfinite(lon) or not -180.0 <= lon <= 180.0:
                raise DomainError(f"{name} must lie in [-180, 180], got {lon}")


# Canonical CSV column names, in serialization order.
CANONICAL_COLUMNS: tuple[str, ...] = (
    "timestamp",
    "category",
    "amount",
    "first_name",
    "last_name",
    "gender",
    "job",
    "date_of_birth",
    "home_address",
    "customer_lat",
    "customer_lon",
    "merchant_lat",
    "merchant_lon",
    "is_fraud",
)

# Aliases used by the widely circulated public card-fraud CSV layout.
_PUBLIC_ALIASES: dict[str, str] = {
    "timestamp": "trans_date_trans_time",
    "amount": "amt",
    "first_name": "first",
    "last_name": "last",
    "date_of_birth": "dob",
    "customer_lat": "lat",
    "customer_lon": "long",
    "merchant_lat": "merch_lat",
    "merchant_lon": "merch_long",
}

_PUBLIC_ADDRESS_PARTS = ("street", "city", "state", "zip")


@dataclass
class ParseResult:
    """Outcome of parsing a transaction stream."""

    records: list[RawTransaction]
    total_rows: int
    skipped: int
    skip_examples: list[tuple[int, str]] = field(default_factory=list)


def _resolve_columns(header: Sequence[str]) -> tuple[dict[str, str], bool]:
    """Map canonical field names onto the columns present in ``header``.

    Returns (mapping, compose_address).  Missing fields raise SchemaError
    naming every absent canonical column.
    """
    present = set(header)
    mapping: dict[str, str] = {}
    missing: list[str] = []
    compose_address = False
    for name in CANONICAL_COLUMNS:
        if name == "home_address":
            if "home_address" in present:
                mapping[name] = "home_address"
            elif all(p in present for p in _PUBLIC_ADDRESS_PARTS):
                compose_address = True
            else:
                missing.append(name)
            continue
        if name in present:
            mapping[name] = name
        elif _PUBLIC_ALIASES.get(name) in present:
            mapping[name] = _PUBLIC_ALIASES[name]
        else:
            missing.append(name)
    if missing:
        raise SchemaError(f"missing required columns: {', '.join(missing)}")
    return mapping, compose_address


def _parse_timestamp(text: str) -> datetime:
    try:
        return datetime.fromisoformat(text.strip())
    except ValueError:
        raise ValueError(f"bad timestamp {text!r}")


def _parse_bool01(text: str) -> bool:
    text = text.strip()
    if text == "0":
        return False
    if text == "1":
        return True
    raise ValueError(f"is_fraud must be 0 or 1, got {text!r}")


def parse_transactions(source: str | Path | IO) -> ParseResult:
    """Parse comma-separated transaction records from a path or stream.

    Accepts the canonical column names or the public-dataset aliases
    (``trans_date_trans_time``, ``amt``, ``first``, ``last``, ``dob``,
    ``lat``/``long``, ``merch_lat``/``merch_long``, plus ``street``,
    ``city``, ``state``, ``zip`` composing the home address).  Rows whose
    fields violate the transaction invariants are counted and skipped;
    missing columns raise SchemaError.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return _parse_stream(fh)
    if not callable(getattr(source, "read", None)):
        raise DomainError("source must be a path or a readable stream")
    if isinstance(source.read(0), bytes):
        return _parse_stream(io.TextIOWrapper(source, encoding="utf-8", newline=""))
    return _parse_stream(source)


def _parse_stream(fh) -> ParseResult:
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError("empty input: no header row")
    mapping, compose_address = _resolve_columns(header)
    col_index = {name: header.index(src) for name, src in mapping.items()}
    part_index = {p: header.index(p) for p in _PUBLIC_ADDRESS_PARTS if p in header}

    records: list[RawTransaction] = []
    total = 0
    skipped = 0
    examples: list[tuple[int, str]] = []
    for line_no, row in enumerate(reader, start=2):
        if not row:
            continue
        total += 1
        try:
            if len(row) != len(header):
                raise ValueError(f"expected {len(header)} fields, got {len(row)}")
            if compose_address:
                address = "{}, {}, {} {}".format(*(row[part_index[p]].strip() for p in _PUBLIC_ADDRESS_PARTS))
            else:
                address = row[col_index["home_address"]].strip()
            rec = RawTransaction(
                timestamp=_parse_timestamp(row[col_index["timestamp"]]),
                category=row[col_index["category"]].strip(),
                amount=float(row[col_index["amount"]]),
                first_name=row[col_index["first_name"]].strip(),
                last_name=row[col_index["last_name"]].strip(),
                gender=row[col_index["gender"]].strip().upper(),
                job=row[col_index["job"]].strip(),
                date_of_birth=row[col_index["date_of_birth"]].strip(),
                home_address=address,
                customer_lat=float(row[col_index["customer_lat"]]),
                customer_lon=float(row[col_index["customer_lon"]]),
                merchant_lat=float(row[col_index["merchant_lat"]]),
                merchant_lon=float(row[col_index["merchant_lon"]]),
                is_fraud=_parse_bool01(row[col_index["is_fraud"]]),
            )
        except (ValueError, DomainError) as exc:
            skipped += 1
            if len(examples) < 20:
                examples.append((line_no, str(exc)))
            continue
        records.append(rec)
    return ParseResult(records=records, total_rows=total, skipped=skipped, skip_examples=examples)


def save_transactions_csv(transactions: Iterable[RawTransaction], path: str | Path) -> None:
    """Write transactions using the canonical column layout."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CANONICAL_COLUMNS)
        for t in transactions:
            writer.writerow(
                [
                    t.timestamp.isoformat(sep=" "),
                    t.category,
                    repr(float(t.amount)),  # plain-float repr parses back exactly
                    t.first_name,
                    t.last_name,
                    t.gender,
                    t.job,
                    t.date_of_birth,
                    t.home_address,
                    repr(float(t.customer_lat)),
                    repr(float(t.customer_lon)),
                    repr(float(t.merchant_lat)),
                    repr(float(t.merchant_lon)),
                    "1" if t.is_fraud else "0",
                ]
            )


def derive_customer_key(
    first_name: str, last_name: str, job: str, date_of_birth: str, home_address: str
) -> str:
    """Derive the 16-hex-character customer key from the identity fields.

    Fields are stripped of surrounding whitespace, lowercased, joined with
    '|', and hashed with 64-bit FNV-1a.
    """
    parts = (first_name, last_name, job, date_of_birth, home_address)
    joined = "|".join(p.strip().lower() for p in parts)
    return fnv1a_64_hex(joined.encode("utf-8"))


def customer_key_of(t: RawTransaction) -> str:
    """Customer key for a transaction's card holder."""
    return derive_customer_key(t.first_name, t.last_name, t.job, t.date_of_birth, t.home_address)


def bin_time(ts: datetime) -> TimeBin:
    """Assign a timestamp to its six-hour bin by hour of day."""
    h = ts.hour
    if 6 <= h < 12:
        return TimeBin.H06_12
    if 12 <= h < 18:
        return TimeBin.H12_18
    if h >= 18:
        return TimeBin.H18_00
    return TimeBin.H00_06


def continent_of(lat: float, lon: float) -> Continent:
    """Map coordinates to a continent via fixed bounding boxes.

    Boxes are checked in a fixed order with first match winning; points
    outside every box (open ocean, small islands) map to UNKNOWN.
    Out-of-range coordinates raise DomainError.
    """
    if not (math.isfinite(lat) and -90.0 <= lat <= 90.0):
        raise DomainError(f"latitude must lie in [-90, 90], got {lat}")
    if not (math.isfinite(lon) and -180.0 <= lon <= 180.0):
        raise DomainError(f"longitude must lie in [-180, 180], got {lon}")
    for cont, lat_lo, lat_hi, lon_lo, lon_hi in _CONTINENT_BOXES:
        if lat_lo <= lat <= lat_hi and lon_lo <= lon <= lon_hi:
            return cont
    return Continent.UNKNOWN


def count_locations(transactions: Sequence[RawTransaction]) -> dict[str, int]:
    """Count distinct merchant coordinate pairs per customer key."""
    seen: dict[str, set[tuple[float, float]]] = {}
    for t in transactions:
        key = customer_key_of(t)
        seen.setdefault(key, set()).add((t.merchant_lat, t.merchant_lon))
    return {key: len(points) for key, points in seen.items()}


@dataclass
class FeatureTable:
    """Engineered feature matrix with labels and row-aligned customer keys."""

    column_names: list[str]
    rows: np.ndarray
    labels: np.ndarray
    customer_keys: list[str]

    def __post_init__(self):
        if self.rows.ndim != 2:
            raise DomainError("rows must be a 2-d array")
        n = self.rows.shape[0]
        if len(self.labels) != n or len(self.customer_keys) != n:
            raise DomainError("rows, labels, and customer_keys must be row-aligned")
        if self.rows.shape[1] != len(self.column_names):
            raise DomainError("rows width must match column_names")


_DOW_COLUMNS = ("dow_mon", "dow_tue", "dow_wed", "dow_thu", "dow_fri", "dow_sat", "dow_sun")
_TIME_COLUMNS = tuple(f"time_{b.value}" for b in TimeBin)

EMBEDDING_MODE = "embeddings"
ONEHOT_MODE = "onehot_category"


def feature_columns(
    mode: str, categories: Sequence[str] | None = None, dim: int = 20
) -> list[str]:
    """Column names for a feature table in assembly order."""
    cols = ["amount"]
    cols.extend(_DOW_COLUMNS)
    cols.extend(_TIME_COLUMNS)
    cols.append("gender")
    cols.append("number_of_locations")
    cols.extend(f"trans_cont_{c.value}" for c in Continent)
    cols.extend(f"home_cont_{c.value}" for c in Continent)
    if mode == ONEHOT_MODE:
        cols.extend(f"cat_{c}" for c in sorted(categories or ()))
    elif mode == EMBEDDING_MODE:
        cols.extend(f"emb_{i:02d}" for i in range(dim))
        cols.append("has_embedding")
    else:
        raise ConfigError(f"mode must be '{ONEHOT_MODE}' or '{EMBEDDING_MODE}', got {mode!r}")
    return cols


def build_feature_table(
    transactions: Sequence[RawTransaction],
    mode: str = ONEHOT_MODE,
    space=None,
    categories: Sequence[str] | None = None,
) -> FeatureTable:
    """Assemble the feature matrix for a transaction list.

    Column order: amount; day-of-week one-hot (Monday first); six-hour
    time-bin one-hot; gender (F=1, M=0); number of distinct merchant
    locations for the customer across ``transactions``; transaction
    (merchant) continent one-hot; home continent one-hot; then either a
    sorted category one-hot block or ``dim`` embedding coordinates plus a
    has_embedding indicator.

    In embedding mode ``space`` is required; customers absent from its
    vocabulary get zero coordinates and has_embedding 0.  In one-hot mode
    ``categories`` fixes the category block (defaults to the distinct
    categories observed); a transaction with a category outside the block
    raises DomainError.
    """
    if mode == EMBEDDING_MODE:
        if space is None:
            raise ConfigError("embeddings mode requires an embedding space")
        dim = space.dim
        cols = feature_columns(mode, dim=dim)
    else:
        cat_list = sorted(categories) if categories is not None else sorted({t.category for t in transactions})
        cat_pos = {c: i for i, c in enumerate(cat_list)}
        cols = feature_columns(mode, categories=cat_list)

    n = len(transactions)
    X = np.zeros((n, len(cols)), dtype=np.float64)
    labels = np.zeros(n, dtype=np.int64)
    keys = [customer_key_of(t) for t in transactions]
    loc_counts = count_locations(transactions)
    cont_index = {c: i for i, c in enumerate(Continent)}
    time_index = {b: i for i, b in enumerate(TimeBin)}
    base = 1 + 7 + 4 + 2  # offset of the continent blocks
    for i, t in enumerate(transactions):
        X[i, 0] = t.amount
        X[i, 1 + t.timestamp.weekday()] = 1.0
        X[i, 8 + time_index[bin_time(t.timestamp)]] = 1.0
        X[i, 12] = 1.0 if t.gender == "F" else 0.0
        X[i, 13] = float(loc_counts[keys[i]])
        X[i, base + cont_index[continent_of(t.merchant_lat, t.merchant_lon)]] = 1.0
        X[i, base + 8 + cont_index[continent_of(t.customer_lat, t.customer_lon)]] = 1.0
        labels[i] = 1 if t.is_fraud else 0
        if mode == ONEHOT_MODE:
            j = cat_pos.get(t.category)
            if j is None:
                raise DomainError(f"category {t.category!r} not in the configured category set")
            X[i, base + 16 + j] = 1.0
        else:
            vec = space.get(keys[i])
            if vec is not None:
                X[i, base + 16 : base + 16 + dim] = vec
                X[i, base + 16 + dim] = 1.0
    return FeatureTable(column_names=cols, rows=X, labels=labels, customer_keys=keys)


def save_feature_table(table: FeatureTable, path: str | Path) -> None:
    """Write a feature table as comma-separated text plus a JSON sidecar.

    Layout: header ``customer_key,label,<feature columns>``; floats are
    written with ``repr`` so values round-trip exactly.  The sidecar
    (``<path>.meta.json``) records row and label counts.
    """
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("customer_key,label," + ",".join(table.column_names) + "\n")
        for i in range(table.rows.shape[0]):
            vals = ",".join(repr(float(v)) for v in table.rows[i])
            fh.write(f"{table.customer_keys[i]},{int(table.labels[i])},{vals}\n")
    positives = int(table.labels.sum())
    meta = {
        "rows": int(table.rows.shape[0]),
        "columns": len(table.column_names),
        "positives": positives,
        "negatives": int(table.rows.shape[0]) - positives,
    }
    with open(str(path) + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_feature_table(path: str | Path) -> FeatureTable:
    """Load a feature table written by :func:`save_feature_table`."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        header = fh.readline().rstrip("\n")
        parts = header.split(",")
        if parts[:2] != ["customer_key", "label"]:
            raise FormatError("header must start with customer_key,label", line=1)
        cols = parts[2:]
        keys: list[str] = []
        labels: list[int] = []
        rows: list[list[float]] = []
        for line_no, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split(",")
            if len(fields) != len(parts):
                raise FormatError(f"expected {len(parts)} fields, got {len(fields)}", line=line_no)
            keys.append(fields[0])
            if fields[1] not in ("0", "1"):
                raise FormatError(f"label must be 0 or 1, got {fields[1]!r}", line=line_no)
            labels.append(int(fields[1]))
            try:
                rows.append([float(v) for v in fields[2:]])
            except ValueError as exc:
                raise FormatError(str(exc), line=line_no)
    X = np.array(rows, dtype=np.float64) if rows else np.zeros((0, len(cols)))
    y = np.array(labels, dtype=np.int64)
    return FeatureTable(column_names=cols, rows=X, labels=y, customer_keys=keys)


# --- synthetic data -------------------------------------------------------

@dataclass
class SyntheticConfig:
    """Parameters for the synthetic transaction generator."""

    n_customers: int
    n_transactions: int
    n_categories: int = 14
    n_rings: int = 0
    ring_size: int = 10
    fraud_rate: float = 0.02
    seed: int = 0
    meetings_per_ring: int = 10
    ring_fraud_share: float = 0.97
    # log-mean lift of ring-meeting fraud amounts over clean amounts; at low
    # values ring fraud hides in ordinary amounts and only co-occurrence
    # structure can expose it (background fraud keeps the full 1.0 lift)
    ring_amount_shift: float = 1.0


_CATEGORY_POOL = (
    "dining", "electronics", "entertainment", "fuel", "grocery", "health",
    "home", "kids", "misc", "personal_care", "shopping", "sports",
    "travel", "utilities",
)

_FIRST_NAMES = (
    "alice", "brian", "carla", "derek", "elena", "felix", "gina", "hugo",
    "irene", "jonas", "karen", "leo", "mia", "nathan", "olga", "pete",
    "quinn", "rosa", "sam", "tina", "uma", "victor", "wanda", "xavier",
)

_LAST_NAMES = (
    "adler", "brooks", "castro", "dunn", "evans", "fischer", "gomez",
    "hansen", "ito", "jensen", "kim", "lopez", "meyer", "novak", "ortiz",
    "patel", "quist", "rossi", "silva", "tran", "ueda", "vargas", "weiss",
    "young",
)

_JOBS = (
    "accountant", "architect", "baker", "chemist", "dentist", "editor",
    "engineer", "farmer", "journalist", "librarian", "nurse", "pharmacist",
    "pilot", "teacher", "translator", "veterinarian",
)

_STREETS = (
    "maple", "oak", "cedar", "pine", "elm", "birch", "walnut", "spruce",
    "ash", "willow", "laurel", "hazel", "alder", "poplar", "linden", "rowan",
)

_CITIES = (
    "fairview", "riverton", "lakewood", "hillcrest", "brookfield",
    "stonebridge", "mapleton", "clearwater", "ridgeway", "oakdale",
    "summerfield", "westbrook", "eastvale", "northgate", "southport",
    "greenfield",
)


def _hash_frac(tag: str, i: int) -> float:
    """Deterministic value in [0, 1) derived from a tag and an index."""
    return fnv1a_64(f"synth:{tag}:{i}".encode("utf-8")) / 2.0**64


def _customer_identity(i: int) -> tuple[str, str, str, str, str, str, float, float]:
    """Identity fields and home coordinates for synthetic customer ``i``.

    Fully determined by the index (no RNG), so ring membership can be
    recovered without regenerating transactions.  The street number makes
    every address, and therefore every customer key, distinct.
    """
    first = _FIRST_NAMES[i % len(_FIRST_NAMES)]
    last = _LAST_NAMES[(i // len(_FIRST_NAMES)) % len(_LAST_NAMES)]
    job = _JOBS[int(_hash_frac("job", i) * len(_JOBS))]
    year = 1950 + int(_hash_frac("dob_y", i) * 50)
    month = 1 + int(_hash_frac("dob_m", i) * 12)
    day = 1 + int(_hash_frac("dob_d", i) * 28)
    dob = f"{year:04d}-{month:02d}-{day:02d}"
    street = _STREETS[i % len(_STREETS)]
    city = _CITIES[int(_hash_frac("city", i) * len(_CITIES))]
    zip5 = 10000 + (i * 37) % 89999
    address = f"{100 + i} {street} st, {city} {zip5:05d}"
    gender = "F" if _hash_frac("gender", i) < 0.5 else "M"
    lat = 25.0 + 24.0 * _hash_frac("lat", i)
    lon = -124.0 + 57.0 * _hash_frac("lon", i)
    return first, last, job, dob, address, gender, lat, lon


def _customer_key_for_index(i: int) -> str:
    first, last, job, dob, address, _, _, _ = _customer_identity(i)
    return derive_customer_key(first, last, job, dob, address)


def planted_rings(config: SyntheticConfig) -> list[list[str]]:
    """Customer keys of each planted ring, without generating transactions."""
    _validate_synthetic(config)
    out = []
    for r in range(config.n_rings):
        lo = r * config.ring_size
        out.append([_customer_key_for_index(i) for i in range(lo, lo + config.ring_size)])
    return out


def _validate_synthetic(config: SyntheticConfig) -> None:
    c = config
    if c.n_customers < 1:
        raise ConfigError("synthetic.n_customers must be >= 1")
    if c.n_transactions < 0:
        raise ConfigError("synthetic.n_transactions must be >= 0")
    if not 1 <= c.n_categories <= len(_CATEGORY_POOL):
        raise ConfigError(f"synthetic.n_categories must lie in [1, {len(_CATEGORY_POOL)}]")
    if c.n_rings < 0:
        raise ConfigError("synthetic.n_rings must be >= 0")
    if c.n_rings > 0 and c.ring_size < 2:
        raise ConfigError("synthetic.ring_size must be >= 2 when rings are planted")
    if c.n_rings * c.ring_size > c.n_customers:
        raise ConfigError("synthetic.n_rings * ring_size must not exceed n_customers")
    if not 0.0 <= c.fraud_rate < 1.0:
        raise ConfigError("synthetic.fraud_rate must lie in [0, 1)")
    if c.meetings_per_ring < 1:
        raise ConfigError("synthetic.meetings_per_ring must be >= 1")
    if not 0.0 <= c.ring_fraud_share <= 1.0:
        raise ConfigError("synthetic.ring_fraud_share must lie in [0, 1]")
    if not 0.0 <= c.ring_amount_shift <= 5.0:
        raise ConfigError("synthetic.ring_amount_shift must lie in [0, 5]")
    ring_tx = c.n_rings * c.meetings_per_ring * c.ring_size
    if ring_tx > c.n_transactions:
        raise ConfigError("synthetic ring transactions exceed n_transactions; "
                          "lower n_rings, ring_size, or meetings_per_ring")


_YEAR_START = datetime(2024, 1, 1)  # a Monday, so week k starts at day 7k


def _amounts(
    rng: np.random.Generator, n: int, fraud: np.ndarray, fraud_shift: float = 1.0
) -> np.ndarray:
    """Transaction amounts: overlapping log-normals, shifted up for fraud."""
    amt = rng.lognormal(mean=3.6, sigma=0.9, size=n)
    n_fraud = int(fraud.sum())
    if n_fraud:
        amt[fraud] = rng.lognormal(mean=3.6 + fraud_shift, sigma=0.8, size=n_fraud)
    return np.round(amt, 2)


def generate_synthetic(config: SyntheticConfig) -> list[RawTransaction]:
    """Generate a deterministic synthetic transaction corpus.

    Customers 0..n_rings*ring_size-1 form collusion rings.  Each ring
    holds ``meetings_per_ring`` meetings, each pinned to a (category,
    week) slot; every member transacts once per meeting within a few
    minutes of the others, so members share sentence context.  A share of
    the fraud budget (``ring_fraud_share``) lands on meeting transactions
    via a per-transaction coin; the rest is spread uniformly over
    background traffic.  Categories are uniform everywhere, so category
    alone carries no ring signal.  Output is sorted and reproducible:
    equal configs yield identical corpora.
    """
    _validate_synthetic(config)
    c = config
    rng = np.random.default_rng(c.seed)

    identities = [_customer_identity(i) for i in range(c.n_customers)]
    categories = _CATEGORY_POOL[: c.n_categories]

    ring_tx = c.n_rings * c.meetings_per_ring * c.ring_size
    bg_tx = c.n_transactions - ring_tx
    fraud_target = c.fraud_rate * c.n_transactions
    ring_fraud_target = fraud_target * c.ring_fraud_share if ring_tx else 0.0
    p_ring = min(0.95, ring_fraud_target / ring_tx) if ring_tx else 0.0
    p_bg = (fraud_target - p_ring * ring_tx) / bg_tx if bg_tx else 0.0
    p_bg = min(0.95, max(0.0, p_bg))

    rows: list[tuple[datetime, int, str, float, bool]] = []

    # Ring meetings: one transaction per member, minutes apart.
    for r in range(c.n_rings):
        members = range(r * c.ring_size, (r + 1) * c.ring_size)
        weeks = rng.integers(0, 52, size=c.meetings_per_ring)
        cats = rng.integers(0, len(categories), size=c.meetings_per_ring)
        days = rng.integers(0, 7, size=c.meetings_per_ring)
        hours = rng.integers(8, 22, size=c.meetings_per_ring)
        for m in range(c.meetings_per_ring):
            base = _YEAR_START + timedelta(days=int(weeks[m]) * 7 + int(days[m]), hours=int(hours[m]))
            fraud = rng.random(c.ring_size) < p_ring
            amounts = _amounts(rng, c.ring_size, fraud, c.ring_amount_shift)
            for pos, cust in enumerate(members):
                ts = base + timedelta(minutes=pos)
                rows.append((ts, cust, categories[cats[m]], float(amounts[pos]), bool(fraud[pos])))

    # Background traffic: categories and times uniform; customers weighted so
    # ring members' meeting transactions do not inflate their totals (every
    # customer gets the same expected transaction count, keeping per-customer
    # volume uninformative about ring membership).
    if bg_tx:
        target = c.n_transactions / c.n_customers
        weights = np.full(c.n_customers, target, dtype=np.float64)
        if c.n_rings:
            n_members = c.n_rings * c.ring_size
            weights[:n_members] = max(0.0, target - c.meetings_per_ring)
        total = float(weights.sum())
        if total <= 0.0:
            weights[:] = 1.0
            total = float(c.n_customers)
        custs = rng.choice(c.n_customers, size=bg_tx, p=weights / total)
        cats = rng.integers(0, len(categories), size=bg_tx)
        minutes = rng.integers(0, 364 * 24 * 60, size=bg_tx)
        fraud = rng.random(bg_tx) < p_bg
        amounts = _amounts(rng, bg_tx, fraud)
        for j in range(bg_tx):
            ts = _YEAR_START + timedelta(minutes=int(minutes[j]))
            rows.append((ts, int(custs[j]), categories[cats[j]], float(amounts[j]), bool(fraud[j])))

    noise = rng.random((len(rows), 2)) * 4.0 - 2.0  # merchant offset from home

    out: list[RawTransaction] = []
    for j, (ts, cust, cat, amount, fraud) in enumerate(rows):
        first, last, job, dob, address, gender, lat, lon = identities[cust]
        out.append(
            RawTransaction(
                timestamp=ts,
                category=cat,
                amount=amount,
                first_name=first,
                last_name=last,
                gender=gender,
                job=job,
                date_of_birth=dob,
                home_address=address,
                customer_lat=lat,
                customer_lon=lon,
                merchant_lat=float(min(89.9, max(-89.9, lat + noise[j, 0]))),
                merchant_lon=float(min(179.9, max(-179.9, lon + noise[j, 1]))),
                is_fraud=fraud,
            )
        )
    out.sort(key=lambda t: (t.timestamp, customer_key_of(t), t.category, t.amount))
    return out
