"""
m11lab API Tests
Geometry and reduction endpoints, error mapping and the count cache.
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from fastapi.testclient import TestClient
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker

from m11lab.main import app
from m11lab.database import get_db, Base
from m11lab.reduction_lab import count_points

# Test database setup - a SQLite file next to the tests
SQLALCHEMY_DATABASE_URL = "sqlite:///./test_m11lab_api.db"

engine = create_engine(SQLALCHEMY_DATABASE_URL, connect_args={"check_same_thread": False}, echo=False)
TestingSessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)

def override_get_db():
    try:
        db = TestingSessionLocal()
        yield db
    finally:
        db.close()

app.dependency_overrides[get_db] = override_get_db

client = TestClient(app)


def setup_module(module=None):
    """Start every run from an empty count cache"""
    print("🔧 Setting up SQLite test database...")
    Base.metadata.drop_all(bind=engine)
    Base.metadata.create_all(bind=engine)
    print("✅ Created database tables")


def test_health():
    response = client.get("/")
    assert response.status_code == 200
    response = client.get("/api/healthchecker")
    assert response.status_code == 200, f"Healthchecker failed: {response.text}"
    response = client.get("/api/db-healthchecker")
    assert response.json() == {"message": "Database is healthy"}
    print("✅ Health checks passed")


def test_relations():
    response = client.get("/api/geometry/relations")
    assert response.status_code == 200
    data = response.json()
    assert data["certified"] is True, f"Relations not certified: {data}"
    assert len(data["relations"]) == 4


def test_fixed_and_geodesic_points():
    response = client.get("/api/geometry/fixed-points")
    assert response.status_code == 200
    data = response.json()
    assert [p["name"] for p in data["points"]] == ["P", "Q", "R"]
    assert abs(float(data["points"][0]["im"]) - 4.2533) < 5e-4

    response = client.get("/api/geometry/geodesic-points")
    assert response.status_code == 200
    assert response.json()["results"] == 5
    print("✅ Fixed points and geodesic points returned")


def test_forms():
    response = client.get("/api/geometry/forms")
    assert response.status_code == 200
    forms = {f["name"]: f for f in response.json()["forms"]}
    assert forms["QR"]["discriminant"] == "-4+8*u"
    assert forms["PR"]["primitive"] is False


def test_cm_points():
    response = client.get("/api/geometry/cm-points", params={"lam": "3"})
    assert response.status_code == 200, f"CM points failed: {response.text}"
    records = response.json()
    assert len(records) == 2
    assert {r["order"] for r in records} == {"MaximalOE", "NonMaximal"}

    response = client.get("/api/geometry/cm-points", params={"lam": "2+u"})
    assert response.status_code == 400
    assert response.json()["error"] == "DomainError"
    print("✅ CM points for lambda = 3 located, 2+u rejected")


def test_lambdas():
    response = client.get("/api/geometry/lambdas", params={"norm_bound": 200})
    assert response.status_code == 200
    for record in response.json():
        assert record["passes"] is True
    response = client.get("/api/geometry/lambdas", params={"norm_bound": 10 ** 6})
    assert response.status_code == 422


def test_count():
    response = client.get("/api/reduction/count", params={"t": "2", "q": 11})
    assert response.status_code == 200
    assert response.json()["count"] == count_points(2, 11)

    response = client.get("/api/reduction/count", params={"t": "abc", "q": 11})
    assert response.status_code == 400
    response = client.get("/api/reduction/count", params={"t": "2", "q": 25})
    assert response.status_code == 400
    assert response.json()["error"] == "BadPrimeError"


def test_lpoly_fills_cache():
    response = client.get("/api/reduction/lpoly", params={"t": "2", "p": 11})
    assert response.status_code == 200, f"lpoly failed: {response.text}"
    first = response.json()
    assert first["method"] == "counts"

    response = client.get("/api/reduction/lpoly", params={"t": "2", "p": 11})
    assert response.json()["method"] == "cache"
    assert response.json()["coefficients"] == first["coefficients"]

    # t -> 1 - t reads the same entry
    response = client.get("/api/reduction/lpoly", params={"t": "-1", "p": 11})
    assert response.json()["method"] == "cache"
    assert response.json()["coefficients"] == first["coefficients"]

    response = client.get("/api/reduction/cache", params={"p": 11})
    assert response.status_code == 200
    data = response.json()
    assert data["results"] == 4
    assert [c["k"] for c in data["counts"]] == [1, 2, 3, 4]
    assert data["counts"][0]["t_num"] == "-1"
    print("✅ L-polynomial cached and reused")


def test_lpoly_errors():
    response = client.get("/api/reduction/lpoly", params={"t": "2", "p": 5})
    assert response.status_code == 400
    response = client.get("/api/reduction/lpoly", params={"t": "2", "p": 1000})
    assert response.status_code == 422
    response = client.get("/api/reduction/lpoly", params={"t": "2", "p": 11, "method": "guess"})
    assert response.status_code == 422


def test_newton_and_scan():
    response = client.get("/api/reduction/newton", params={"t": "3", "p": 7})
    assert response.status_code == 200
    assert response.json()["label"] in ("MuOrdinary", "Basic")

    response = client.get("/api/reduction/scan", params={"t": "2", "p_bound": 20})
    assert response.status_code == 200
    data = response.json()
    assert {r["p"] for r in data["skipped"]} == {2, 5}
    assert data["J"] == "27/4"
    assert all(r["label"] != "Other" for r in data["rows"])


def test_hypotheses():
    response = client.get("/api/reduction/hypotheses", params={"J": "-1"})
    assert response.status_code == 200
    data = response.json()
    assert data["all"] is True
    assert data["lehr"] == "DegeneratesToCP"
    response = client.get("/api/reduction/hypotheses", params={"J": "27/4"})
    assert response.json()["h1"] is False


def run_api_tests():
    """Run every API test in order"""
    print("🧮 M11LAB API TEST SUITE")
    print("=" * 50)
    try:
        setup_module()
        test_health()
        test_relations()
        test_fixed_and_geodesic_points()
        test_forms()
        test_cm_points()
        test_lambdas()
        test_count()
        test_lpoly_fills_cache()
        test_lpoly_errors()
        test_newton_and_scan()
        test_hypotheses()
        print("\n" + "=" * 50)
        print("🎉 ALL API TESTS PASSED!")
        print("=" * 50)
        return True
    except AssertionError as e:
        print(f"\n❌ API TEST FAILED: {str(e)}")
        return False
    except Exception as e:
        print(f"\n💥 ERROR: {str(e)}")
        import traceback
        traceback.print_exc()
        return False

if __name__ == "__main__":
    success = run_api_tests()
    if not success:
        sys.exit(1)
