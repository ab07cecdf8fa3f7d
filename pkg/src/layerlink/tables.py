"""Bundled value pools for the synthetic dataset generator.

Lists are ordered most-frequent-first; the generator assigns Zipf-like
weights by rank, which reproduces the heavy skew of real person data
(a handful of very common names, a long tail of rare ones).
"""

FIRST_NAMES = [
    "JAMES", "MARY", "JOHN", "PATRICIA", "ROBERT", "JENNIFER", "MICHAEL",
    "LINDA", "WILLIAM", "ELIZABETH", "DAVID", "BARBARA", "RICHARD", "SUSAN",
    "JOSEPH", "JESSICA", "THOMAS", "SARAH", "CHARLES", "KAREN", "CHRISTOPHER",
    "NANCY", "DANIEL", "LISA", "MATTHEW", "BETTY", "ANTHONY", "MARGARET",
    "MARK", "SANDRA", "DONALD", "ASHLEY", "STEVEN", "KIMBERLY", "PAUL",
    "EMILY", "ANDREW", "DONNA", "JOSHUA", "MICHELLE", "KENNETH", "DOROTHY",
    "KEVIN", "CAROL", "BRIAN", "AMANDA", "GEORGE", "MELISSA", "EDWARD",
    "DEBORAH", "RONALD", "STEPHANIE", "TIMOTHY", "REBECCA", "JASON", "SHARON",
    "JEFFREY", "LAURA", "RYAN", "CYNTHIA", "JACOB", "KATHLEEN", "GARY",
    "AMY", "NICHOLAS", "ANGELA", "ERIC", "SHIRLEY", "JONATHAN", "ANNA",
    "STEPHEN", "BRENDA", "LARRY", "PAMELA", "JUSTIN", "EMMA", "SCOTT",
    "NICOLE", "BRANDON", "HELEN", "BENJAMIN", "SAMANTHA", "SAMUEL",
    "KATHERINE", "GREGORY", "CHRISTINE", "FRANK", "DEBRA", "ALEXANDER",
    "RACHEL", "RAYMOND", "CAROLYN", "PATRICK", "JANET", "JACK", "CATHERINE",
    "DENNIS", "MARIA", "JERRY", "HEATHER", "TYLER", "DIANE", "AARON", "RUTH",
    "JOSE", "JULIE", "ADAM", "OLIVIA", "HENRY", "JOYCE", "NATHAN",
    "VIRGINIA", "DOUGLAS", "VICTORIA", "ZACHARY", "KELLY", "PETER",
    "LAUREN", "KYLE", "CHRISTINA", "WALTER", "JOAN", "ETHAN", "EVELYN",
    "JEREMY", "JUDITH", "HAROLD", "MEGAN", "KEITH", "CHERYL", "CHRISTIAN",
    "ANDREA", "ROGER", "HANNAH", "NOAH", "MARTHA", "GERALD", "JACQUELINE",
    "CARL", "FRANCES", "TERRY", "GLORIA", "SEAN", "ANN", "AUSTIN", "TERESA",
    "ARTHUR", "KATHRYN", "LAWRENCE", "SARA", "JESSE", "JANICE", "DYLAN",
    "JEAN", "BRYAN", "ALICE", "JOE", "MADISON", "JORDAN", "DORIS", "BILLY",
    "ABIGAIL", "BRUCE", "JULIA", "ALBERT", "JUDY", "WILLIE", "GRACE",
    "GABRIEL", "DENISE", "LOGAN", "AMBER", "ALAN", "MARILYN", "JUAN",
    "BEVERLY", "WAYNE", "DANIELLE", "ROY", "THERESA", "RALPH", "SOPHIA",
    "RANDY", "MARIE", "EUGENE", "DIANA", "VINCENT", "BRITTANY", "RUSSELL",
    "NATALIE", "ELIJAH", "ISABELLA", "LOUIS", "CHARLOTTE", "BOBBY", "ROSE",
    "PHILIP", "ALEXIS", "JOHNNY", "KAYLA", "PAULA", "LELAND", "HARVEY",
    "MIRANDA", "CLIFFORD", "LUCILLE", "MARVIN", "GERTRUDE", "CHESTER",
    "PEARL", "HOMER", "OPAL", "RUFUS", "MABEL", "CLYDE", "BEULAH",
]

LAST_NAMES = [
    "SMITH", "JOHNSON", "WILLIAMS", "BROWN", "JONES", "GARCIA", "MILLER",
    "DAVIS", "RODRIGUEZ", "MARTINEZ", "HERNANDEZ", "LOPEZ", "GONZALEZ",
    "WILSON", "ANDERSON", "THOMAS", "TAYLOR", "MOORE", "JACKSON", "MARTIN",
    "LEE", "PEREZ", "THOMPSON", "WHITE", "HARRIS", "SANCHEZ", "CLARK",
    "RAMIREZ", "LEWIS", "ROBINSON", "WALKER", "YOUNG", "ALLEN", "KING",
    "WRIGHT", "SCOTT", "TORRES", "NGUYEN", "HILL", "FLORES", "GREEN",
    "ADAMS", "NELSON", "BAKER", "HALL", "RIVERA", "CAMPBELL", "MITCHELL",
    "CARTER", "ROBERTS", "GOMEZ", "PHILLIPS", "EVANS", "TURNER", "DIAZ",
    "PARKER", "CRUZ", "EDWARDS", "COLLINS", "REYES", "STEWART", "MORRIS",
    "MORALES", "MURPHY", "COOK", "ROGERS", "GUTIERREZ", "ORTIZ", "MORGAN",
    "COOPER", "PETERSON", "BAILEY", "REED", "KELLY", "HOWARD", "RAMOS",
    "KIM", "COX", "WARD", "RICHARDSON", "WATSON", "BROOKS", "CHAVEZ",
    "WOOD", "JAMES", "BENNETT", "GRAY", "MENDOZA", "RUIZ", "HUGHES",
    "PRICE", "ALVAREZ", "CASTILLO", "SANDERS", "PATEL", "MYERS", "LONG",
    "ROSS", "FOSTER", "JIMENEZ", "POWELL", "JENKINS", "PERRY", "RUSSELL",
    "SULLIVAN", "BELL", "COLEMAN", "BUTLER", "HENDERSON", "BARNES",
    "GONZALES", "FISHER", "VASQUEZ", "SIMMONS", "ROMERO", "JORDAN",
    "PATTERSON", "ALEXANDER", "HAMILTON", "GRAHAM", "REYNOLDS", "GRIFFIN",
    "WALLACE", "MORENO", "WEST", "COLE", "HAYES", "BRYANT", "HERRERA",
    "GIBSON", "ELLIS", "TRAN", "MEDINA", "AGUILAR", "STEVENS", "MURRAY",
    "FORD", "CASTRO", "MARSHALL", "OWENS", "HARRISON", "FERNANDEZ",
    "MCDONALD", "WOODS", "WASHINGTON", "KENNEDY", "WELLS", "VARGAS",
    "HENRY", "CHEN", "FREEMAN", "WEBB", "TUCKER", "GUZMAN", "BURNS",
    "CRAWFORD", "OLSON", "SIMPSON", "PORTER", "HUNTER", "GORDON", "MENDEZ",
    "SILVA", "SHAW", "SNYDER", "MASON", "DIXON", "MUNOZ", "HUNT", "HICKS",
    "HOLMES", "PALMER", "WAGNER", "BLACK", "ROBERTSON", "BOYD", "ROSE",
    "STONE", "SALAZAR", "FOX", "WARREN", "MILLS", "MEYER", "RICE",
    "SCHMIDT", "GARZA", "DANIELS", "FERGUSON", "NICHOLS", "STEPHENS",
    "SOTO", "WEAVER", "RYAN", "GARDNER", "PAYNE", "GRANT", "DUNN",
    "KELLEY", "SPENCER", "HAWKINS", "ARNOLD", "PIERCE", "VAZQUEZ",
    "HANSEN", "PETERS", "SANTOS", "HART", "BRADLEY", "KNIGHT", "ELLIOTT",
    "CUNNINGHAM", "DUNCAN", "ARMSTRONG", "HUDSON", "CARROLL", "LANE",
    "RILEY", "ANDREWS", "ALVARADO", "RAY", "DELGADO", "BERRY", "PERKINS",
    "HOFFMAN", "JOHNSTON", "MATTHEWS", "PENA", "RICHARDS", "CONTRERAS",
    "WILLIS", "CARPENTER", "LAWRENCE", "SANDOVAL", "GUERRERO", "GEORGE",
    "CHAPMAN", "RIOS", "ESTRADA", "ORTEGA", "WATKINS", "GREENE", "NUNEZ",
    "WHEELER", "VALDEZ", "HARPER", "BURKE", "LARSON", "SANTIAGO",
    "MALDONADO", "MORRISON", "FRANKLIN", "CARLSON", "AUSTIN", "DOMINGUEZ",
    "CARR", "LAWSON", "JACOBS", "OBRIEN", "LYNCH", "SINGH", "VEGA",
    "BISHOP", "MONTGOMERY", "OLIVER", "JENSEN", "HARVEY", "WILLIAMSON",
    "GILBERT", "DEAN", "SIMS", "ESPINOZA", "HOWELL", "LI", "WONG",
    "REID", "HANSON", "LE", "MCCOY", "GARRETT", "BURTON", "FULLER",
    "WANG", "WEBER", "WELCH", "ROJAS", "LUCAS", "MARQUEZ", "FIELDS",
    "PARK", "YANG", "LITTLE", "BANKS", "PADILLA", "DAY", "WALSH", "BOWMAN",
    "SCHULTZ", "LUNA", "FOWLER", "MEJIA", "DAVIDSON", "ACOSTA", "BREWER",
]

# (city, zip prefix, number of zip suffixes); one synthetic state, so
# zip codes share leading digits across nearby cities.
CITIES = [
    ("RALEIGH", "276", 6), ("CHARLOTTE", "282", 6), ("GREENSBORO", "274", 4),
    ("DURHAM", "277", 4), ("WINSTON SALEM", "271", 4), ("FAYETTEVILLE", "283", 3),
    ("CARY", "275", 3), ("WILMINGTON", "284", 3), ("HIGH POINT", "272", 2),
    ("ASHEVILLE", "288", 3), ("CONCORD", "280", 2), ("GASTONIA", "280", 2),
    ("GREENVILLE", "278", 2), ("JACKSONVILLE", "285", 2), ("CHAPEL HILL", "275", 2),
    ("ROCKY MOUNT", "278", 2), ("BURLINGTON", "272", 2), ("HUNTERSVILLE", "280", 1),
    ("WILSON", "278", 2), ("KANNAPOLIS", "280", 1), ("APEX", "275", 1),
    ("HICKORY", "286", 2), ("GOLDSBORO", "275", 2), ("INDIAN TRAIL", "280", 1),
    ("MOORESVILLE", "281", 1), ("WAKE FOREST", "275", 1), ("MONROE", "281", 1),
    ("SALISBURY", "281", 2), ("NEW BERN", "285", 1), ("HOLLY SPRINGS", "275", 1),
    ("MATTHEWS", "281", 1), ("SANFORD", "273", 1), ("CORNELIUS", "280", 1),
    ("GARNER", "275", 1), ("THOMASVILLE", "273", 1), ("ASHEBORO", "272", 1),
    ("STATESVILLE", "286", 1), ("MINT HILL", "282", 1), ("KERNERSVILLE", "272", 1),
    ("MORRISVILLE", "275", 1), ("FUQUAY VARINA", "275", 1), ("LUMBERTON", "283", 1),
    ("KINSTON", "285", 1), ("CARRBORO", "275", 1), ("HAVELOCK", "285", 1),
    ("SHELBY", "281", 1), ("CLEMMONS", "270", 1), ("LEXINGTON", "272", 1),
]

# Birthplaces: the cities above plus out-of-state places, so the pool
# is broader than the residence distribution.
BIRTH_PLACES = [c[0] for c in CITIES[:30]] + [
    "RICHMOND", "ATLANTA", "COLUMBIA", "KNOXVILLE", "NORFOLK", "CHARLESTON",
    "NASHVILLE", "MEMPHIS", "LOUISVILLE", "BALTIMORE", "PHILADELPHIA",
    "PITTSBURGH", "CLEVELAND", "COLUMBUS", "CINCINNATI", "DETROIT",
    "CHICAGO", "NEW YORK", "BROOKLYN", "BOSTON", "NEWARK", "MIAMI",
    "TAMPA", "ORLANDO", "JACKSONVILLE FL", "HOUSTON", "DALLAS",
    "SAN ANTONIO", "PHOENIX", "DENVER", "SEATTLE", "PORTLAND",
    "LOS ANGELES", "SAN DIEGO", "SAN JUAN", "KINGSTON", "HAVANA",
    "TORONTO", "LONDON", "MANILA", "SEOUL", "MUMBAI", "LAGOS", "ACCRA",
]
