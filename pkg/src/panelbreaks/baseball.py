"""Seasonal team-statistics ingestion and panel construction.

Loads Lahman-style Teams CSVs (one row per team-season), normalizes
franchise ids through a versioned lookup table shipped with the package
(geographic moves and renames collapse to one id), and assembles the three
panel configurations the detectors consume:

  league_aggregate — per-year league means of HR, K, BB, SB per-game rates,
      z-scored per statistic (4 x T);
  per_statistic   — one per-game rate row per core franchise for a single
      statistic (16 x T), raw rates;
  per_team        — ten season-z-scored statistics over one franchise's
      entire existence (10 x T_franchise).

Counts are imputed (least-squares on year, per franchise series) before any
rate is formed, because missingness lives in the raw counts. League-level
recipes restrict to AL/NL rows when the file carries a league column; team
panels use every season of the franchise and standardize against all teams
present in that season.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import (
    ConfigError,
    FranchiseTooShort,
    InsufficientData,
    MissingFranchiseYear,
    MissingYears,
    ParseError,
    UnknownFranchise,
)
from .panel import Panel, build_panel
from .preprocess import RawSeries, impute_linear, per_game_rate, season_zscore, series_zscore

# statistic key -> TeamSeason attribute; K is batter strikeouts (CSV column
# SO), SOA is strikeouts thrown by the team's pitchers, ATT is attendance.
STAT_ATTR = {
    "R": "r",
    "H": "h",
    "HR": "hr",
    "BB": "bb",
    "K": "so",
    "SB": "sb",
    "AB": "ab",
    "RA": "ra",
    "HA": "ha",
    "HRA": "hra",
    "BBA": "bba",
    "SOA": "soa",
    "ATT": "attendance",
}

LEAGUE_STATS = ("HR", "K", "BB", "SB")
TEAM_PANEL_STATS = ("R", "H", "HR", "BB", "K", "RA", "HA", "HRA", "BBA", "SOA")
LEAGUE_YEARS = (1900, 2020)
MAJOR_LEAGUES = ("AL", "NL")

# the sixteen franchises with uninterrupted seasons over LEAGUE_YEARS,
# alphabetical by label; row order of per-statistic panels
CORE_FRANCHISES = (
    "ATL", "BAL", "BOS", "CHC", "CHW", "CIN", "CLE", "DET",
    "LAD", "MIN", "NYY", "OAK", "PHI", "PIT", "SFG", "STL",
)

REQUIRED_COLUMNS = (
    "yearID", "franchID", "G", "R", "H", "HR", "BB", "SO", "SB", "AB",
    "RA", "HA", "HRA", "BBA", "SOA", "attendance",
)

# Reference change-point years for the bundled baseball analyses; the
# reproduction experiment diffs its detections against these. Keys follow
# the CLI recipe syntax; "variance" entries are second-order change points.
REFERENCE_RESULTS = {
    "league": {"mean": (1924, 1954, 1993, 2009), "variance": (1919,)},
    "stat:ATT": {"mean": (1945, 1976), "variance": (1944, 2008)},
    "stat:BB": {"mean": (1936,), "variance": ()},
    "stat:HR": {"mean": (1920, 1946, 1967, 1993), "variance": (1927, 1944, 1995, 2007)},
    "stat:R": {"mean": (1919, 1940), "variance": (1935,)},
    "stat:SB": {"mean": (1919, 1967), "variance": (1919, 1966)},
    "stat:K": {"mean": (1956, 1993, 2009), "variance": (1995,)},
    "team:ARI": {"mean": (), "variance": ()},
    "team:ATL": {"mean": (1990,), "variance": (1887,)},
    "team:BAL": {"mean": (1959, 1999), "variance": ()},
    "team:BOS": {"mean": (1918, 1937), "variance": (2008,)},
    "team:CHC": {"mean": (1891,), "variance": ()},
    "team:CHW": {"mean": (1973,), "variance": (1969,)},
    "team:CIN": {"mean": (1918, 1952, 1978), "variance": ()},
    "team:CLE": {"mean": (1944, 1958, 1993), "variance": (1966,)},
    "team:COL": {"mean": (), "variance": ()},
    "team:DET": {"mean": (1958, 1988), "variance": (1912, 1942)},
    "team:HOU": {"mean": (1999,), "variance": (2010,)},
    "team:KCR": {"mean": (1997,), "variance": ()},
    "team:LAA": {"mean": (1977,), "variance": ()},
    "team:LAD": {"mean": (1940, 1961), "variance": ()},
    "team:MIA": {"mean": (), "variance": ()},
    "team:MIL": {"mean": (1977, 1996), "variance": ()},
    "team:MIN": {"mean": (1959,), "variance": ()},
    "team:NYM": {"mean": (), "variance": (1974,)},
    "team:NYY": {"mean": (1918, 1964), "variance": ()},
    "team:OAK": {"mean": (), "variance": ()},
    "team:PHI": {"mean": (1917, 1949), "variance": ()},
    "team:PIT": {"mean": (), "variance": (1902, 2001)},
    "team:SDP": {"mean": (1977,), "variance": (1977,)},
    "team:SEA": {"mean": (1999,), "variance": ()},
    "team:SFG": {"mean": (1903, 1973), "variance": ()},
    "team:STL": {"mean": (1932,), "variance": ()},
    "team:TBR": {"mean": (2007,), "variance": ()},
    "team:TEX": {"mean": (1985,), "variance": ()},
    "team:TOR": {"mean": (), "variance": ()},
    "team:WSN": {"mean": (2011,), "variance": ()},
}


@dataclass(frozen=True)
class TeamSeason:
    """One team-season row; None marks a missing count."""

    year: int
    franchise: str
    league: str | None
    g: int
    r: float | None
    h: float | None
    hr: float | None
    bb: float | None
    so: float | None
    sb: float | None
    ab: float | None
    ra: float | None
    ha: float | None
    hra: float | None
    bba: float | None
    soa: float | None
    attendance: float | None

    def get(self, stat: str) -> float | None:
        try:
            return getattr(self, STAT_ATTR[stat])
        except KeyError:
            raise ConfigError(f"unknown statistic {stat!r}; choose from {sorted(STAT_ATTR)}")


@dataclass(frozen=True)
class FranchiseMap:
    """Historical franchise id -> (canonical id, label, modern name)."""

    entries: dict

    def canonical(self, franch_id: str, strict: bool = False) -> str:
        entry = self.entries.get(franch_id)
        if entry is None:
            if strict:
                raise UnknownFranchise(f"franchise id {franch_id!r} not in lookup table")
            return franch_id
        return entry[0]

    def name(self, canonical_id: str) -> str:
        entry = self.entries.get(canonical_id)
        return entry[2] if entry is not None else canonical_id


@dataclass(frozen=True)
class PanelRecipe:
    """Which panel to build: kind, year range, statistics, franchises, leagues."""

    kind: str
    years: tuple[int, int] | None
    statistics: tuple[str, ...]
    franchises: tuple[str, ...] | None
    leagues: tuple[str, ...] | None

    def __post_init__(self):
        for stat in self.statistics:
            if stat not in STAT_ATTR:
                raise ConfigError(f"unknown statistic {stat!r}")
        if self.kind == "league_aggregate":
            if set(self.statistics) != set(LEAGUE_STATS):
                raise ConfigError(f"league panel uses exactly {LEAGUE_STATS}")
            if self.years is None:
                raise ConfigError("league panel needs a year range")
        elif self.kind == "per_statistic":
            if len(self.statistics) != 1:
                raise ConfigError("per-statistic panel takes exactly one statistic")
            if self.franchises != CORE_FRANCHISES:
                raise ConfigError("per-statistic panel uses the sixteen core franchises")
            if self.years != LEAGUE_YEARS:
                raise ConfigError(f"per-statistic panel covers {LEAGUE_YEARS}")
        elif self.kind == "per_team":
            if self.statistics != TEAM_PANEL_STATS:
                raise ConfigError(f"team panel uses exactly {TEAM_PANEL_STATS}")
            if self.franchises is None or len(self.franchises) != 1:
                raise ConfigError("team panel takes exactly one franchise")
        else:
            raise ConfigError(f"unknown recipe kind {self.kind!r}")


def league_recipe(years: tuple[int, int] = LEAGUE_YEARS) -> PanelRecipe:
    return PanelRecipe("league_aggregate", years, LEAGUE_STATS, None, MAJOR_LEAGUES)


def stat_recipe(statistic: str) -> PanelRecipe:
    return PanelRecipe("per_statistic", LEAGUE_YEARS, (statistic,), CORE_FRANCHISES, MAJOR_LEAGUES)


def team_recipe(franchise: str) -> PanelRecipe:
    return PanelRecipe("per_team", None, TEAM_PANEL_STATS, (franchise,), None)


def load_franchise_map(path: str | Path | None = None) -> FranchiseMap:
    """Read a franchise lookup CSV; defaults to the table shipped in the package."""
    if path is None:
        source = resources.files("panelbreaks").joinpath("data/franchises.csv")
        text = source.read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    entries = {}
    reader = csv.DictReader(text.splitlines())
    for row in reader:
        entries[row["franch_id"]] = (row["canonical_id"], row["label"], row["name"])
    return FranchiseMap(entries)


def _parse_number(raw: str | None, row_num: int, column: str, required: bool = False):
    raw = (raw or "").strip()
    if raw == "":
        if required:
            raise ParseError(row_num, column, "required value is empty")
        return None
    try:
        return float(raw)
    except ValueError:
        raise ParseError(row_num, column, f"could not parse {raw!r} as a number") from None


def load_teams_csv(
    path: str | Path,
    franchise_map: FranchiseMap | None = None,
    strict_franchises: bool = False,
) -> list[TeamSeason]:
    """Parse a Teams CSV into TeamSeason rows with explicit missingness.

    Empty cells become None except in yearID, franchID and G, which are
    required (G must be positive). Franchise ids are normalized through the
    lookup table; ids absent from it pass through unchanged unless
    strict_franchises is set, in which case they raise UnknownFranchise.
    """
    fmap = franchise_map or load_franchise_map()
    rows: list[TeamSeason] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in REQUIRED_COLUMNS:
            if col not in header:
                raise ParseError(1, col, "required column absent from header")
        has_league = "lgID" in header
        for row_num, row in enumerate(reader, start=2):
            year = _parse_number(row.get("yearID"), row_num, "yearID", required=True)
            if year != int(year):
                raise ParseError(row_num, "yearID", f"{year} is not an integer year")
            franch = (row.get("franchID") or "").strip()
            if not franch:
                raise ParseError(row_num, "franchID", "required value is empty")
            g = _parse_number(row.get("G"), row_num, "G", required=True)
            if g != int(g) or g <= 0:
                raise ParseError(row_num, "G", f"games must be a positive integer, got {g!r}")
            league = (row.get("lgID") or "").strip() or None if has_league else None
            rows.append(
                TeamSeason(
                    year=int(year),
                    franchise=fmap.canonical(franch, strict=strict_franchises),
                    league=league,
                    g=int(g),
                    r=_parse_number(row.get("R"), row_num, "R"),
                    h=_parse_number(row.get("H"), row_num, "H"),
                    hr=_parse_number(row.get("HR"), row_num, "HR"),
                    bb=_parse_number(row.get("BB"), row_num, "BB"),
                    so=_parse_number(row.get("SO"), row_num, "SO"),
                    sb=_parse_number(row.get("SB"), row_num, "SB"),
                    ab=_parse_number(row.get("AB"), row_num, "AB"),
                    ra=_parse_number(row.get("RA"), row_num, "RA"),
                    ha=_parse_number(row.get("HA"), row_num, "HA"),
                    hra=_parse_number(row.get("HRA"), row_num, "HRA"),
                    bba=_parse_number(row.get("BBA"), row_num, "BBA"),
                    soa=_parse_number(row.get("SOA"), row_num, "SOA"),
                    attendance=_parse_number(row.get("attendance"), row_num, "attendance"),
                )
            )
    return rows


def _group_rows(rows, leagues=None, years=None) -> dict:
    """franchise -> {year: TeamSeason}, optionally filtered by league and year range."""
    grouped: dict[str, dict[int, TeamSeason]] = {}
    for r in rows:
        if leagues is not None and r.league is not None and r.league not in leagues:
            continue
        if years is not None and not (years[0] <= r.year <= years[1]):
            continue
        seasons = grouped.setdefault(r.franchise, {})
        if r.year in seasons:
            raise ConfigError(f"duplicate row for franchise {r.franchise} in {r.year}")
        seasons[r.year] = r
    return grouped


def _imputed_rate_map(seasons: dict, stat: str) -> dict:
    """year -> per-game rate for one franchise, counts imputed first.

    A statistic with fewer than two observed seasons cannot be imputed; its
    missing years are simply absent from the returned map.
    """
    years = sorted(seasons)
    counts = RawSeries.from_optional(years, [seasons[y].get(stat) for y in years])
    games = RawSeries.from_optional(years, [float(seasons[y].g) for y in years])
    try:
        counts = impute_linear(counts)
    except InsufficientData:
        pass
    rates = per_game_rate(counts, games)
    return {
        y: float(v)
        for y, v, miss in zip(years, rates.values, rates.missing)
        if not miss
    }


def build_league_panel(rows, recipe: PanelRecipe | None = None) -> Panel:
    """League-average per-game rates of the four approach statistics,
    z-scored per statistic so the series share a scale."""
    recipe = recipe or league_recipe()
    grouped = _group_rows(rows, recipe.leagues, recipe.years)
    years = list(range(recipe.years[0], recipe.years[1] + 1))
    franchises = sorted(grouped)
    series = []
    for stat in recipe.statistics:
        rate_maps = {f: _imputed_rate_map(grouped[f], stat) for f in franchises}
        row = []
        for y in years:
            vals = [rate_maps[f][y] for f in franchises if y in rate_maps[f]]
            if not vals:
                raise MissingYears(f"no {stat} data for {y}")
            row.append(sum(vals) / len(vals))
        series.append(row)
    return series_zscore(build_panel(series, recipe.statistics, years))


def build_stat_panel(rows, statistic: str, recipe: PanelRecipe | None = None) -> Panel:
    """One per-game rate row per core franchise for a single statistic."""
    recipe = recipe or stat_recipe(statistic)
    grouped = _group_rows(rows, recipe.leagues, recipe.years)
    years = list(range(recipe.years[0], recipe.years[1] + 1))
    out = []
    for f in recipe.franchises:
        seasons = grouped.get(f, {})
        for y in years:
            if y not in seasons:
                raise MissingFranchiseYear(f"franchise {f} has no row for {y}")
        rates = _imputed_rate_map(seasons, statistic)
        for y in years:
            if y not in rates:
                raise MissingFranchiseYear(
                    f"franchise {f} has no usable {statistic} value for {y}"
                )
        out.append([rates[y] for y in years])
    return build_panel(out, recipe.franchises, years)


def build_team_panel(
    rows,
    franchise: str,
    min_seasons: int = 10,
    recipe: PanelRecipe | None = None,
) -> Panel:
    """Ten season-z-scored statistics over one franchise's entire existence.

    Rates are standardized against every team present in the same season
    (the team itself included). Defensive statistics are z-scored as-is;
    the detector is sign-agnostic, so no sign flip is applied even though
    lower runs-against is better.
    """
    recipe = recipe or team_recipe(franchise)
    grouped = _group_rows(rows)
    if franchise not in grouped:
        raise FranchiseTooShort(f"franchise {franchise!r} has no rows")
    years_f = sorted(grouped[franchise])
    if len(years_f) < min_seasons:
        raise FranchiseTooShort(
            f"franchise {franchise!r} has {len(years_f)} seasons, needs >= {min_seasons}"
        )
    franchises = sorted(grouped)
    out = []
    for stat in recipe.statistics:
        rate_maps = {f: _imputed_rate_map(grouped[f], stat) for f in franchises}
        own = rate_maps[franchise]
        row = []
        for y in years_f:
            if y not in own:
                raise InsufficientData(f"{franchise} lacks {stat} data for {y}")
            peers = [rate_maps[f][y] for f in franchises if y in rate_maps[f]]
            row.append(season_zscore(own[y], peers))
        out.append(row)
    return build_panel(out, recipe.statistics, years_f)


def load_wide_csv(path: str | Path) -> Panel:
    """Generic loader: first column is the time label, remaining columns are
    series. Every cell must parse; panels carry no missing values."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(1, "", "file is empty") from None
        if len(header) < 2:
            raise ParseError(1, "", "need a time column plus at least one series")
        ids = [h.strip() for h in header[1:]]
        times: list[int] = []
        columns: list[list[float]] = [[] for _ in ids]
        for row_num, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ParseError(row_num, "", f"expected {len(header)} cells, got {len(row)}")
            t = _parse_number(row[0], row_num, header[0], required=True)
            if t != int(t):
                raise ParseError(row_num, header[0], f"{row[0]!r} is not an integer label")
            times.append(int(t))
            for k, cell in enumerate(row[1:]):
                val = _parse_number(cell, row_num, ids[k], required=True)
                columns[k].append(val)
    return build_panel(columns, ids, times)
