import logging

from fastapi import Depends, FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from sqlalchemy import text
from sqlalchemy.exc import OperationalError
from sqlalchemy.orm import Session

from m11lab import geometry, reduction
from m11lab.database import get_db, initialize_database
from m11lab.errors import DomainError, M11Error, SearchExhausted

logger = logging.getLogger(__name__)

app = FastAPI(title="m11lab")

# Initialize database tables
initialize_database()

origins = [
    "http://localhost:3000",
]

app.add_middleware(
    CORSMiddleware,
    allow_origins=origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(geometry.router, tags=['Geometry'], prefix='/api/geometry')
app.include_router(reduction.router, tags=['Reduction'], prefix='/api/reduction')


@app.exception_handler(M11Error)
async def m11_error_handler(request: Request, exc: M11Error):
    if isinstance(exc, DomainError):
        code = 400
    elif isinstance(exc, SearchExhausted):
        code = 404
    else:
        code = 500
        logger.error("certification failed on %s: %s", request.url.path, exc)
    return JSONResponse(status_code=code, content={"error": type(exc).__name__, "detail": str(exc)})


@app.get("/")
async def root():
    return {"message": "Welcome to m11lab. See /docs for API documentation."}


@app.get("/api/healthchecker")
def healthchecker():
    return {"message": "m11lab is running"}


@app.get("/api/db-healthchecker")
def db_healthchecker(db: Session = Depends(get_db)):
    try:
        db.execute(text("SELECT 1"))
        return {"message": "Database is healthy"}
    except OperationalError:
        raise HTTPException(status_code=500, detail="Database is not reachable")
