"""Shared builders for the test suite."""

from datetime import datetime

import numpy as np

from custspace import FeatureTable, RawTransaction


def make_tx(
    ts: datetime | None = None,
    category: str = "grocery",
    amount: float = 25.0,
    first: str = "ann",
    last: str = "lee",
    gender: str = "F",
    job: str = "baker",
    dob: str = "1980-02-03",
    address: str = "1 elm st, fairview 10001",
    home: tuple[float, float] = (40.0, -75.0),
    merchant: tuple[float, float] | None = None,
    fraud: bool = False,
) -> RawTransaction:
    if ts is None:
        ts = datetime(2024, 3, 4, 10, 30)
    if merchant is None:
        merchant = home
    return RawTransaction(
        timestamp=ts,
        category=category,
        amount=amount,
        first_name=first,
        last_name=last,
        gender=gender,
        job=job,
        date_of_birth=dob,
        home_address=address,
        customer_lat=home[0],
        customer_lon=home[1],
        merchant_lat=merchant[0],
        merchant_lon=merchant[1],
        is_fraud=fraud,
    )


def make_table(rows, labels, keys=None, columns=None) -> FeatureTable:
    X = np.asarray(rows, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if keys is None:
        keys = [f"cust{i:04d}" for i in range(X.shape[0])]
    if columns is None:
        columns = [f"f{j}" for j in range(X.shape[1])]
    return FeatureTable(column_names=list(columns), rows=X, labels=y, customer_keys=list(keys))
