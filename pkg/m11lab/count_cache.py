"""Persistent point counts, and their checksummed CSV interchange format."""
from __future__ import annotations

import csv
import hashlib
import io
import logging
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from sqlalchemy.orm import Session

from . import models
from .cyclotomic import klein_J
from .errors import DomainError, InvariantViolation

logger = logging.getLogger(__name__)

HEADER_PREFIX = "# m11lab-count-cache v1 sha256="
COLUMNS = ("j_num", "j_den", "t_num", "t_den", "p", "k", "count")
DEGREES = (1, 2, 3, 4)


def canonical_t(t: Union[int, Fraction]) -> Fraction:
    """Representative of {t, 1 - t}; x -> 1 - x, y -> -y is an isomorphism over Q"""
    t = Fraction(t)
    return min(t, 1 - t)


class CountCache:
    def __init__(self, db: Session) -> None:
        self.db = db

    def _query(self, t: Fraction, p: int):
        c = canonical_t(t)
        return self.db.query(models.PointCount).filter(
            models.PointCount.t_num == str(c.numerator),
            models.PointCount.t_den == str(c.denominator),
            models.PointCount.p == p,
        )

    def get(self, t: Fraction, p: int) -> Optional[Tuple[int, ...]]:
        by_k = {row.k: int(row.count) for row in self._query(t, p).all()}
        if all(k in by_k for k in DEGREES):
            return tuple(by_k[k] for k in DEGREES)
        return None

    def _store(self, t: Fraction, p: int, k: int, count: int) -> bool:
        existing = self._query(t, p).filter(models.PointCount.k == k).first()
        if existing is not None:
            if int(existing.count) != count:
                raise InvariantViolation(
                    f"cached #C_{t}(F_{p}^{k}) = {existing.count} disagrees with {count}"
                )
            return False
        c = canonical_t(t)
        J = klein_J(c)
        self.db.add(models.PointCount(
            j_num=str(J.numerator),
            j_den=str(J.denominator),
            t_num=str(c.numerator),
            t_den=str(c.denominator),
            p=p,
            k=k,
            count=count,
        ))
        return True

    def put(self, t: Fraction, p: int, counts: Sequence[int]) -> None:
        if len(counts) != len(DEGREES):
            raise DomainError(f"expected {len(DEGREES)} counts, got {len(counts)}")
        added = sum(self._store(t, p, k, int(n)) for k, n in zip(DEGREES, counts))
        self.db.commit()
        logger.debug("cached %d counts for t=%s p=%d", added, t, p)

    def rows(self) -> List[models.PointCount]:
        return (
            self.db.query(models.PointCount)
            .order_by(
                models.PointCount.t_num,
                models.PointCount.t_den,
                models.PointCount.p,
                models.PointCount.k,
            )
            .all()
        )

    def export_csv(self, path: Union[str, Path]) -> int:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        rows = self.rows()
        for row in rows:
            writer.writerow([getattr(row, col) for col in COLUMNS])
        body = buf.getvalue()
        digest = hashlib.sha256(body.encode()).hexdigest()
        Path(path).write_text(f"{HEADER_PREFIX}{digest}\n{body}")
        logger.info("exported %d cached counts to %s", len(rows), path)
        return len(rows)

    def import_csv(self, path: Union[str, Path]) -> int:
        text = Path(path).read_text()
        first, _, body = text.partition("\n")
        if not first.startswith(HEADER_PREFIX):
            raise DomainError(f"{path} is not a count-cache export")
        expected = first[len(HEADER_PREFIX):].strip()
        if hashlib.sha256(body.encode()).hexdigest() != expected:
            raise InvariantViolation(f"checksum mismatch in {path}")
        reader = csv.DictReader(io.StringIO(body))
        if tuple(reader.fieldnames or ()) != COLUMNS:
            raise DomainError(f"unexpected columns {reader.fieldnames} in {path}")
        added = 0
        for rec in reader:
            t = Fraction(int(rec["t_num"]), int(rec["t_den"]))
            added += self._store(t, int(rec["p"]), int(rec["k"]), int(rec["count"]))
        self.db.commit()
        logger.info("imported %d new counts from %s", added, path)
        return added
