# Copyright 2026 The dbrouter Authors.
# SPDX-License-Identifier: Apache-2.0
"""Regenerates tests/fixtures/sql_tables_oracle.jsonl with sqlglot.

Each line is {"sql": ..., "tables": [...]}: the lower-cased table names a
query reads, excluding CTE names. Run from the repository root.
"""

import json
import sys

import sqlglot
from sqlglot import exp

QUERIES = [
    "SELECT count(*) FROM singer",
    "SELECT name, country, age FROM singer ORDER BY age DESC",
    "SELECT T2.name FROM singer_in_concert AS T1 JOIN singer AS T2 ON T1.singer_id = T2.singer_id",
    "SELECT T1.name FROM stadium AS T1 JOIN concert AS T2 ON T1.stadium_id = T2.stadium_id WHERE T2.year = 2014",
    "SELECT name FROM stadium WHERE stadium_id NOT IN (SELECT stadium_id FROM concert)",
    "SELECT country FROM singer WHERE age > 40 INTERSECT SELECT country FROM singer WHERE age < 30",
    "SELECT name FROM stadium EXCEPT SELECT T2.name FROM concert AS T1 JOIN stadium AS T2 ON T1.stadium_id = T2.stadium_id",
    "SELECT count(*) FROM (SELECT * FROM endowment WHERE amount > 8.5 GROUP BY school_id HAVING count(*) > 1)",
    "SELECT avg(weight), pettype FROM pets GROUP BY pettype",
    "SELECT T1.fname FROM student AS T1 JOIN has_pet AS T2 ON T1.stuid = T2.stuid JOIN pets AS T3 ON T3.petid = T2.petid WHERE T3.pettype = 'cat'",
    "SELECT major, age FROM student WHERE stuid NOT IN (SELECT T1.stuid FROM student AS T1 JOIN has_pet AS T2 ON T1.stuid = T2.stuid)",
    "SELECT name FROM people WHERE people_id IN (SELECT people_id FROM perpetrator WHERE killed > 10)",
    "SELECT T1.Name FROM people AS T1 JOIN perpetrator AS T2 ON T1.People_ID = T2.People_ID ORDER BY T1.Height DESC LIMIT 1",
    "WITH top AS (SELECT stadium_id FROM concert GROUP BY stadium_id) SELECT name FROM stadium WHERE stadium_id IN (SELECT stadium_id FROM top)",
    "SELECT a.name, (SELECT count(*) FROM concert AS c WHERE c.stadium_id = a.stadium_id) FROM stadium AS a",
    "SELECT DISTINCT T1.Name FROM Musical AS T1 JOIN actor AS T2 ON T1.Musical_ID = T2.Musical_ID",
    "SELECT Nominee FROM musical WHERE Award = 'Tony Award' UNION SELECT Nominee FROM musical WHERE Award = 'Drama Desk Award'",
    "SELECT count(*) FROM flights AS T1 JOIN airports AS T2 ON T1.DestAirport = T2.AirportCode WHERE T2.City = 'Aberdeen'",
    "SELECT T1.Airline FROM airlines AS T1 JOIN flights AS T2 ON T1.uid = T2.Airline GROUP BY T1.Airline ORDER BY count(*) DESC LIMIT 1",
    "SELECT AirportName FROM Airports WHERE AirportCode NOT IN (SELECT SourceAirport FROM Flights UNION SELECT DestAirport FROM Flights)",
    "SELECT template_type_code FROM Templates EXCEPT SELECT template_type_code FROM Templates AS T1 JOIN Documents AS T2 ON T1.template_id = T2.template_id",
    "SELECT count(*) FROM \"Ref_Template_Types\"",
    "SELECT T1.id FROM `course` AS T1 LEFT JOIN teacher T2 ON T1.id = T2.id",
    "SELECT x.a FROM t1 x, t2 y WHERE x.id = y.id",
    "SELECT name FROM museum WHERE num_of_staff > (SELECT min(num_of_staff) FROM museum WHERE open_year > 2010)",
    "SELECT T2.name FROM visit AS T1 JOIN visitor AS T2 ON T1.visitor_id = T2.id GROUP BY T1.visitor_id HAVING count(*) > 1",
    "SELECT count(*) FROM (SELECT T1.id FROM poker_player AS T1 JOIN people AS T2 ON T1.people_id = T2.people_id) AS sub",
    "WITH a AS (SELECT * FROM battle), b AS (SELECT * FROM ship) SELECT count(*) FROM a JOIN b ON a.id = b.lost_in_battle",
    "SELECT LOWER(name) FROM TV_Channel WHERE id IN (SELECT channel FROM cartoon WHERE written_by = 'Todd Casey')",
    "SELECT Country FROM TV_Channel EXCEPT SELECT T1.Country FROM TV_Channel AS T1 JOIN cartoon AS T2 ON T1.id = T2.Channel",
]


def tables_of(sql):
    tree = sqlglot.parse_one(sql, read="sqlite")
    ctes = {c.alias_or_name.lower() for c in tree.find_all(exp.CTE)}
    names = {t.name.lower() for t in tree.find_all(exp.Table)}
    return sorted(names - ctes)


def main(out_path):
    with open(out_path, "w", encoding="utf-8") as out:
        for sql in QUERIES:
            out.write(json.dumps({"sql": sql, "tables": tables_of(sql)}) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures/sql_tables_oracle.jsonl")
