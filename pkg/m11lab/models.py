from sqlalchemy import BigInteger, Column, Integer, String, UniqueConstraint

from m11lab.database import Base


class PointCount(Base):
    """#C_t(F_{p^k}), with t taken up to t -> 1 - t.

    J is kept alongside for lookups by isomorphism class over the
    algebraic closure; counts of the other members of the J-orbit can
    differ by a quintic twist once 5 divides p^k - 1.
    """

    __tablename__ = 'point_counts'
    __table_args__ = (UniqueConstraint('t_num', 't_den', 'p', 'k', name='uq_point_counts_key'),)

    id = Column(Integer, primary_key=True, index=True)
    j_num = Column(String, index=True)
    j_den = Column(String, index=True)
    t_num = Column(String, nullable=False)
    t_den = Column(String, nullable=False)
    p = Column(Integer, nullable=False)
    k = Column(Integer, nullable=False)
    count = Column(BigInteger, nullable=False)
