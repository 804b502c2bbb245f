"""Seeded generator for a synthetic job-listing corpus.

The corpus has deliberately planted structure so downstream models have
something to find:

* every title owns a pool of skills; listing skills and the skills quoted in
  the free text are drawn mostly from that pool;
* every title has weak preferences over qualifications, work type, portal,
  candidate preference, country and seniority;
* titles come in sibling pairs that share part of their skill pool but sit
  far apart on qualification, so skills and tabular columns complement
  each other;
* ``salary_avg = base(title) + geo_premium(region) + size_term(size)
  + slope * exp_avg + noise``, published as a fixed $40K band.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import _vocab
from .errors import ListingValidationError, SchemaError, ValidationError
from .tabular import geo_region_id, parse_experience, parse_salary

CSV_COLUMNS = (
    "Job Id", "Job Title", "Role", "Company", "Company Size", "Country",
    "latitude", "longitude", "Experience", "Salary Range", "Qualifications",
    "Work Type", "Preference", "Job Portal", "skills", "Job Description",
    "Responsibilities", "Contact",
)

# planted-structure knobs
SKILL_POOL_PROB = 0.76
TEXT_POOL_PROB = 0.8
SKILLS_PER_LISTING = (5, 8)
QUALIFICATION_PULL = 0.8
QUALIFICATION_SD = 0.5
# consecutive titles form sibling pairs: they share part of their skill pool
# and sit far apart on the qualification scale
SIBLING_SHARED = 6
SIBLING_QUAL_GAP = 5
CATEGORY_SD = 0.7
WORK_TYPE_PULL = 0.12
PREFERENCE_PULL = 0.12
PORTAL_PULL = 0.12
COUNTRY_PULL = 0.09
BASE_SALARY = (67_000.0, 73_000.0)
GEO_PREMIUM = (-10_000.0, 20_000.0)
SIZE_COEF = 6_000.0  # dollars per decade of headcount
EXP_SLOPE = 2_500.0  # dollars per year of experience
EXP_CENTER_MAX = 2
SALARY_SPREAD = 40_000.0
SALARY_CLIP = (30_000.0, 280_000.0)
ZIPF_S = 1.1


@dataclass(frozen=True)
class JobListing:
    job_id: str
    job_title: str
    role: str
    company: str
    company_size: int
    country: str
    latitude: float
    longitude: float
    experience_text: str
    salary_text: str
    qualifications: str
    work_type: str
    preference: str
    job_portal: str
    skills: str
    job_description: str
    responsibilities: str
    contact: str

    def to_row(self) -> dict:
        return dict(zip(CSV_COLUMNS, (getattr(self, f.name) for f in fields(self))))

    @classmethod
    def from_row(cls, row) -> JobListing:
        vals = [row[c] for c in CSV_COLUMNS]
        names = [f.name for f in fields(cls)]
        kw = dict(zip(names, vals))
        kw["company_size"] = int(kw["company_size"])
        kw["latitude"] = float(kw["latitude"])
        kw["longitude"] = float(kw["longitude"])
        return cls(**kw)


@dataclass(frozen=True)
class GeneratorProfile:
    n_listings: int
    seed: int = 42
    n_titles: int = 60
    n_companies: int = 2000
    skill_pool_per_title: int = 12
    salary_noise_sd: float = 500.0
    geo_cell_deg: float = 10.0

    def validate(self):
        for name in ("n_listings", "n_titles", "n_companies", "skill_pool_per_title"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value <= 0:
                raise ValidationError(f"{name} must be a positive integer, got {value!r}")
        if self.n_titles < 40:
            raise ValidationError(f"n_titles must be >= 40, got {self.n_titles}")
        if not isinstance(self.seed, (int, np.integer)) or not (0 <= self.seed < 2**64):
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if 2 * self.skill_pool_per_title > len(_vocab.SKILLS):
            raise ValidationError(
                f"skill_pool_per_title {self.skill_pool_per_title} exceeds half the "
                f"{len(_vocab.SKILLS)}-skill universe"
            )
        if self.skill_pool_per_title < 3:
            raise ValidationError("skill_pool_per_title must be >= 3")
        if not self.salary_noise_sd >= 0:
            raise ValidationError(f"salary_noise_sd must be >= 0, got {self.salary_noise_sd}")
        cell = self.geo_cell_deg
        if not cell > 0 or 180 / cell != int(180 / cell):
            raise ValidationError(f"geo_cell_deg must divide 180 evenly, got {cell}")
        return self

    def to_dict(self):
        return asdict(self)


@dataclass
class TitlePlant:
    """Hidden per-title parameters drawn from the profile seed."""

    title: str
    pool: tuple[str, ...]
    base_salary: float
    exp_center: int
    qualification: int
    work_type: int
    preference: int
    portal: int
    country: int


@dataclass
class Corpus:
    listings: list[JobListing]
    titles: list[TitlePlant]
    salary_avg_true: np.ndarray
    skill_in_pool: np.ndarray  # fraction of each listing's skills drawn from its pool


def _title_names(n, rng):
    names = list(_vocab.JOB_TITLES)
    if n <= len(names):
        return sorted(names[i] for i in rng.choice(len(names), n, replace=False))
    out = list(names)
    suffix = 2
    while len(out) < n:
        out.extend(f"{t} {suffix}" for t in names[: n - len(out)])
        suffix += 1
    return sorted(out)


def _company_names(n, rng):
    names = list(_vocab.COMPANY_NAMES)
    while len(names) < n:
        names.extend(f"{c} {len(names) // len(_vocab.COMPANY_NAMES) + 1}" for c in _vocab.COMPANY_NAMES)
    perm = rng.permutation(len(names))[:n]
    return [names[i] for i in perm]


def _pulled(rng, preferred, pull, n_values):
    """Draw the preferred value with probability ``pull``, else uniformly."""
    take = rng.random(len(preferred)) < pull
    return np.where(take, preferred, rng.integers(0, n_values, len(preferred)))


def _ordinal_pulled(rng, center, pull, sd, n_values):
    """With probability ``pull`` draw a code near ``center`` (rounded Gaussian),
    else uniformly; linear models can exploit this shape on label codes."""
    near = np.clip(np.rint(center + rng.normal(0.0, sd, len(center))), 0, n_values - 1)
    take = rng.random(len(center)) < pull
    return np.where(take, near, rng.integers(0, n_values, len(center))).astype(np.int64)


def _draw_skills(rng, pool, universe, count, pool_prob):
    chosen, in_pool = [], 0
    while len(chosen) < count:
        from_pool = rng.random() < pool_prob
        skill = pool[rng.integers(len(pool))] if from_pool else universe[rng.integers(len(universe))]
        if skill in chosen:
            continue
        chosen.append(skill)
        in_pool += skill in pool
    return chosen, in_pool


def generate_corpus(profile: GeneratorProfile) -> Corpus:
    """Generate listings together with the hidden ground truth."""
    profile.validate()
    rng = np.random.default_rng(profile.seed)
    n = profile.n_listings
    skills_universe = _vocab.SKILLS
    countries = sorted(_vocab.COUNTRY_BOXES)
    quals, works = _vocab.QUALIFICATIONS, _vocab.WORK_TYPES
    prefs, portals = _vocab.PREFERENCES, _vocab.JOB_PORTALS

    titles = []
    pool_size = profile.skill_pool_per_title
    for j, name in enumerate(_title_names(profile.n_titles, rng)):
        if j % 2 == 0:
            pool_idx = rng.choice(len(skills_universe), pool_size, replace=False)
            qual = int(rng.integers(len(quals)))
        else:
            sib_idx = [skills_universe.index(sk) for sk in titles[j - 1].pool]
            shared = rng.choice(sib_idx, min(SIBLING_SHARED, pool_size), replace=False)
            rest = np.setdiff1d(np.arange(len(skills_universe)), sib_idx)
            own = rng.choice(rest, pool_size - len(shared), replace=False)
            pool_idx = np.concatenate([shared, own])
            qual = (titles[j - 1].qualification + SIBLING_QUAL_GAP) % len(quals)
        titles.append(TitlePlant(
            title=name,
            pool=tuple(skills_universe[i] for i in sorted(pool_idx)),
            base_salary=float(rng.uniform(*BASE_SALARY)),
            exp_center=int(rng.integers(0, EXP_CENTER_MAX + 1)),
            qualification=qual,
            work_type=int(rng.integers(len(works))),
            preference=int(rng.integers(len(prefs))),
            portal=int(rng.integers(len(portals))),
            country=int(rng.integers(len(countries))),
        ))
    n_titles = len(titles)

    company_names = _company_names(profile.n_companies, rng)
    company_sizes = np.rint(10 ** rng.uniform(1.3, 5.2, profile.n_companies)).astype(np.int64)
    zipf = 1.0 / np.arange(1, profile.n_companies + 1) ** ZIPF_S
    zipf /= zipf.sum()

    cell = profile.geo_cell_deg
    n_cells = int(180 / cell) * int(360 / cell)
    geo_premium = rng.uniform(*GEO_PREMIUM, n_cells)

    # title assignment: every title once, the rest by mildly uneven weights
    title_weights = rng.uniform(0.8, 1.2, n_titles)
    title_weights /= title_weights.sum()
    head = np.arange(min(n, n_titles)) if n >= 10 * n_titles else np.empty(0, dtype=np.int64)
    tail = rng.choice(n_titles, n - len(head), p=title_weights)
    title_idx = rng.permutation(np.concatenate([head, tail]).astype(np.int64))

    def per_title(attr):
        return np.array([getattr(t, attr) for t in titles], dtype=np.int64)[title_idx]

    company_idx = rng.choice(profile.n_companies, n, p=zipf)
    role_idx = rng.integers(0, len(_vocab.ROLES), n)
    country_idx = _pulled(rng, per_title("country"), COUNTRY_PULL, len(countries))
    qual_idx = _ordinal_pulled(rng, per_title("qualification"), QUALIFICATION_PULL, QUALIFICATION_SD, len(quals))
    work_idx = _ordinal_pulled(rng, per_title("work_type"), WORK_TYPE_PULL, CATEGORY_SD, len(works))
    pref_idx = _ordinal_pulled(rng, per_title("preference"), PREFERENCE_PULL, CATEGORY_SD, len(prefs))
    portal_idx = _ordinal_pulled(rng, per_title("portal"), PORTAL_PULL, CATEGORY_SD, len(portals))

    exp_lo = np.clip(per_title("exp_center") + rng.integers(-3, 6, n), 0, 40)
    exp_hi = exp_lo + rng.integers(2, 13, n)

    boxes = np.array([_vocab.COUNTRY_BOXES[c] for c in countries])[country_idx]
    lat = np.round(boxes[:, 0] + rng.random(n) * (boxes[:, 1] - boxes[:, 0]), 4)
    lon = np.round(boxes[:, 2] + rng.random(n) * (boxes[:, 3] - boxes[:, 2]), 4)

    sizes = company_sizes[company_idx]
    regions = np.array([geo_region_id(a, b, cell) for a, b in zip(lat, lon)], dtype=np.int64)
    base = np.array([t.base_salary for t in titles])[title_idx]
    salary_true = (
        base
        + geo_premium[regions]
        + SIZE_COEF * np.log10(sizes)
        + EXP_SLOPE * (exp_lo + exp_hi) / 2
        + rng.normal(0.0, profile.salary_noise_sd, n)
    )
    salary_true = np.clip(salary_true, *SALARY_CLIP)
    salary_mid_k = np.rint(salary_true / 1000).astype(np.int64)
    half_k = int(SALARY_SPREAD / 2000)

    ids = rng.integers(0, 2**62, n)
    phone = rng.integers(0, 10**7, n)
    skill_counts = rng.integers(SKILLS_PER_LISTING[0], SKILLS_PER_LISTING[1] + 1, n)
    desc_tpl = rng.integers(0, len(_vocab.DESCRIPTION_TEMPLATES), n)
    resp_tpl = rng.integers(0, len(_vocab.RESPONSIBILITY_TEMPLATES), n)

    listings, pool_frac = [], np.empty(n)
    for i in range(n):
        plant = titles[title_idx[i]]
        skills, in_pool = _draw_skills(rng, plant.pool, skills_universe, skill_counts[i], SKILL_POOL_PROB)
        pool_frac[i] = in_pool / len(skills)
        d_sk, _ = _draw_skills(rng, plant.pool, skills_universe, 3, TEXT_POOL_PROB)
        r_sk, _ = _draw_skills(rng, plant.pool, skills_universe, 3, TEXT_POOL_PROB)
        description = _vocab.DESCRIPTION_TEMPLATES[desc_tpl[i]].format(
            title=plant.title, s1=d_sk[0], s2=d_sk[1], s3=d_sk[2])
        responsibilities = _vocab.RESPONSIBILITY_TEMPLATES[resp_tpl[i]].format(
            title=plant.title, s1=r_sk[0], s2=r_sk[1], s3=r_sk[2])
        p = int(phone[i])
        listings.append(JobListing(
            job_id=f"{i:07d}{int(ids[i]):016x}",
            job_title=plant.title,
            role=_vocab.ROLES[role_idx[i]],
            company=company_names[company_idx[i]],
            company_size=int(sizes[i]),
            country=countries[country_idx[i]],
            latitude=float(lat[i]),
            longitude=float(lon[i]),
            experience_text=f"{exp_lo[i]} to {exp_hi[i]} Years",
            salary_text=f"${salary_mid_k[i] - half_k}K-${salary_mid_k[i] + half_k}K",
            qualifications=quals[qual_idx[i]],
            work_type=works[work_idx[i]],
            preference=prefs[pref_idx[i]],
            job_portal=portals[portal_idx[i]],
            skills=", ".join(skills),
            job_description=description,
            responsibilities=responsibilities,
            contact=f"({p // 10**4 % 1000:03d}) 555-{p % 10**4:04d}",
        ))
    return Corpus(listings, titles, salary_true, pool_frac)


def generate_listings(profile: GeneratorProfile) -> list[JobListing]:
    return generate_corpus(profile).listings


def listings_digest(listings) -> str:
    h = hashlib.sha256()
    for lst in listings:
        h.update("\x1f".join(str(v) for v in lst.to_row().values()).encode())
        h.update(b"\x1e")
    return h.hexdigest()


# ---------------------------------------------------------------------------
# CSV persistence


def write_listings_csv(listings, destination):
    destination = Path(destination)
    try:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
            writer.writerow(CSV_COLUMNS)
            for lst in listings:
                writer.writerow([lst.to_row()[c] for c in CSV_COLUMNS])
    except OSError as exc:
        raise OSError(f"cannot write listings to {destination}: {exc}") from exc


def _row_problems(listing: JobListing):
    problems = []
    try:
        lo, hi, _ = parse_experience(listing.experience_text)
        if lo > hi:
            problems.append(f"experience {listing.experience_text!r} has a > b")
        if not 0 <= lo <= 40:
            problems.append(f"experience lower bound {lo} outside [0, 40]")
    except ValidationError as exc:
        problems.append(str(exc))
    try:
        s_lo, s_hi, _ = parse_salary(listing.salary_text)
        if not (10_000 <= s_lo and s_hi <= 300_000):
            problems.append(f"salary {listing.salary_text!r} outside $10K-$300K")
    except ValidationError as exc:
        problems.append(str(exc))
    if not listing.skills.strip():
        problems.append("skills is empty")
    if not -90 <= listing.latitude <= 90 or not -180 <= listing.longitude <= 180:
        problems.append("coordinates out of range")
    box = _vocab.COUNTRY_BOXES.get(listing.country)
    if box is not None:
        if not (box[0] <= listing.latitude <= box[1] and box[2] <= listing.longitude <= box[3]):
            problems.append(f"coordinates outside the {listing.country} bounding box")
    return problems


def read_listings_csv(source) -> list[JobListing]:
    """Parse a listings CSV, checking the header and every row's invariants."""
    source = Path(source)
    with open(source, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{source}: empty file, no header", missing=CSV_COLUMNS) from None
        missing = [c for c in CSV_COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"{source}: header is missing column(s) {missing}", missing=missing)
        pos = [header.index(c) for c in CSV_COLUMNS]
        listings, violations = [], []
        for row_no, row in enumerate(reader, start=1):
            if len(row) != len(header):
                violations.append((row_no, f"expected {len(header)} fields, got {len(row)}"))
                continue
            try:
                listing = JobListing.from_row({c: row[p] for c, p in zip(CSV_COLUMNS, pos)})
            except ValueError as exc:
                violations.append((row_no, f"unparsable value: {exc}"))
                continue
            problems = _row_problems(listing)
            if problems:
                violations.extend((row_no, p) for p in problems)
            listings.append(listing)
    if violations:
        raise ListingValidationError(violations)
    return listings
