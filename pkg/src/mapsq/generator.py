"""Seeded synthetic university-domain RDF data, shaped after LUBM.

Per university: 15-25 departments; per department 7-14 professors, each
teaching 1-2 courses and advising 8-14 students; every student takes 2-4
distinct courses of their department.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator, TextIO, Union

import numpy as np

UB = "http://swat.cse.lehigh.edu/onto/univ-bench.owl#"
RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"

DEPARTMENTS = (15, 25)
PROFESSORS = (7, 14)
COURSES_PER_PROFESSOR = (1, 2)
STUDENTS_PER_PROFESSOR = (8, 14)
COURSES_PER_STUDENT = (2, 4)

PROFESSOR_TYPES = ("FullProfessor", "AssociateProfessor", "AssistantProfessor")
STUDENT_TYPES = ("UndergraduateStudent", "GraduateStudent")


@dataclass(frozen=True)
class GenConfig:
    universities: int
    seed: int = 0
    output: Union[str, os.PathLike, None] = None

    def __post_init__(self):
        if self.universities < 1:
            raise ValueError("universities must be at least 1")


def university_iri(u: int) -> str:
    return f"http://www.University{u}.edu"


def department_iri(u: int, d: int) -> str:
    return f"http://www.Department{d}.University{u}.edu"


def triple_bounds(universities: int = 1) -> tuple[int, int]:
    """Smallest and largest triple count the generator can emit."""
    def count(depts, profs, courses, students, taken):
        # type, memberOf, advisor, then one takesCourse per course
        per_student = 3 + taken
        # type, worksFor, plus teacherOf + course type per course
        per_prof = 2 + 2 * courses + students * per_student
        per_dept = 2 + profs * per_prof
        return 1 + depts * per_dept

    lo = count(DEPARTMENTS[0], PROFESSORS[0], COURSES_PER_PROFESSOR[0], STUDENTS_PER_PROFESSOR[0],
               COURSES_PER_STUDENT[0])
    hi = count(DEPARTMENTS[1], PROFESSORS[1], COURSES_PER_PROFESSOR[1], STUDENTS_PER_PROFESSOR[1],
               COURSES_PER_STUDENT[1])
    return universities * lo, universities * hi


def generate_triples(universities: int, seed: int = 0) -> Iterator[tuple[str, str, str]]:
    """Yield N-Triples term strings ``(s, p, o)`` in a fixed order."""
    rng = np.random.default_rng(seed)

    def between(bounds: tuple[int, int]) -> int:
        return int(rng.integers(bounds[0], bounds[1] + 1))

    def iri(value: str) -> str:
        return f"<{value}>"

    rdf_type = iri(RDF_TYPE)
    ub = {name: iri(UB + name) for name in (
        "University", "Department", "Course", "worksFor", "memberOf", "advisor",
        "teacherOf", "takesCourse", "subOrganizationOf", *PROFESSOR_TYPES, *STUDENT_TYPES)}

    for u in range(universities):
        univ = iri(university_iri(u))
        yield univ, rdf_type, ub["University"]
        for d in range(between(DEPARTMENTS)):
            base = department_iri(u, d)
            dept = iri(base)
            yield dept, rdf_type, ub["Department"]
            yield dept, ub["subOrganizationOf"], univ

            n_profs = between(PROFESSORS)
            courses: list[list[str]] = []
            for p in range(n_profs):
                courses.append([iri(f"{base}/Course{p}_{c}") for c in range(between(COURSES_PER_PROFESSOR))])
            all_courses = [c for per_prof in courses for c in per_prof]

            student_no = 0
            for p in range(n_profs):
                prof = iri(f"{base}/Professor{p}")
                yield prof, rdf_type, ub[PROFESSOR_TYPES[int(rng.integers(len(PROFESSOR_TYPES)))]]
                yield prof, ub["worksFor"], dept
                for course in courses[p]:
                    yield course, rdf_type, ub["Course"]
                    yield prof, ub["teacherOf"], course
                for _ in range(between(STUDENTS_PER_PROFESSOR)):
                    student = iri(f"{base}/Student{student_no}")
                    student_no += 1
                    yield student, rdf_type, ub[STUDENT_TYPES[int(rng.integers(len(STUDENT_TYPES)))]]
                    yield student, ub["memberOf"], dept
                    yield student, ub["advisor"], prof
                    taken = rng.choice(len(all_courses), size=between(COURSES_PER_STUDENT), replace=False)
                    for c in sorted(taken.tolist()):
                        yield student, ub["takesCourse"], all_courses[c]


def write_ntriples(universities: int, seed: int, out: TextIO) -> int:
    n = 0
    for s, p, o in generate_triples(universities, seed):
        out.write(f"{s} {p} {o} .\n")
        n += 1
    return n


def generate(cfg: GenConfig) -> int:
    """Write the dataset for ``cfg`` to ``cfg.output``; returns the triple count."""
    if cfg.output is None:
        raise ValueError("GenConfig.output is required")
    with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
        return write_ntriples(cfg.universities, cfg.seed, fh)
