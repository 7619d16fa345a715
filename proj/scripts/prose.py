"""Deterministic generator of encyclopedic English prose.

Used to build the language-model corpus, the curated side of the quality
training data and the article bodies of the page fixtures.
"""

import random

COUNTRIES = [
    "Norway", "Portugal", "Chile", "Kenya", "Japan", "Canada", "Austria", "Peru", "Greece", "Finland",
    "Morocco", "Scotland", "Brazil", "Poland", "Ireland", "Mexico", "Sweden", "Hungary", "Denmark", "Croatia",
    "Iceland", "Estonia", "Slovenia", "Uruguay",
]
NATIONALITIES = [
    "Norwegian", "Portuguese", "Chilean", "Austrian", "Greek", "Finnish", "Scottish", "Polish", "Irish",
    "Swedish", "Hungarian", "Danish", "Croatian", "Icelandic", "Estonian",
]
REGIONS = [
    "north", "south", "east", "west", "centre", "northern part", "southern part", "eastern part", "western part",
    "upper valley", "lower valley", "coastal region", "highlands",
]
DIRECTIONS = ["north", "south", "east", "west", "north-east", "south-west", "north-west", "south-east"]
SYLLABLES_A = ["Ar", "Bel", "Cal", "Dor", "El", "Fen", "Gar", "Hal", "Ir", "Kel", "Lin", "Mar", "Nor", "Os",
               "Pel", "Ros", "Sal", "Tor", "Val", "Wen", "Ald", "Bran", "Cor", "Dun", "Ever", "Gran"]
SYLLABLES_B = ["ford", "holm", "wick", "stad", "berg", "mouth", "dale", "haven", "bury", "field", "more",
               "ton", "by", "vik", "lund", "brook", "gate", "mere"]
RIVER_A = ["Al", "Bren", "Dra", "Esk", "Gar", "Hav", "Ise", "Lor", "Mer", "Ner", "Ore", "Rav", "Sev", "Tam",
           "Ul", "Ver", "Wey", "Yar"]
RIVER_B = ["a", "en", "ova", "ay", "ith", "on", "elle", "and", "ur", "ine"]
FIRST_M = ["Johan", "Anton", "Karl", "Henrik", "Pedro", "Tomas", "Andreas", "Jakob", "Lukas", "Mateo", "Oskar",
           "Viktor", "Emil", "Nikolai", "Felix", "Hugo", "Leon", "Adam", "Marek", "Sean"]
FIRST_F = ["Anna", "Maria", "Elena", "Ingrid", "Sofia", "Clara", "Helena", "Eva", "Laura", "Marta", "Nora",
           "Julia", "Ida", "Agnes", "Vera", "Lena", "Rosa", "Alma", "Greta", "Irene"]
LAST = ["Lindqvist", "Moreau", "Halvorsen", "Novak", "Kowalski", "Brennan", "Varga", "Dahl", "Petrov",
        "Sorensen", "Almeida", "Rossi", "Keller", "Berg", "Holm", "Nagy", "Costa", "Weber", "Larsen", "Marin",
        "Fischer", "Kovac", "Eriksen", "Silva", "Horvat", "Jansen"]
SAINTS = ["Saint Peter", "Saint Mary", "Saint Nicholas", "Saint Anne", "Saint Michael", "Saint James",
          "Saint Catherine", "Saint Olaf"]
ADJ = ["small", "large", "old", "famous", "quiet", "busy", "beautiful", "important", "ancient", "modern",
       "narrow", "wide", "remarkable", "simple", "elegant", "plain", "impressive", "well known", "historic",
       "wealthy", "poor", "remote", "fertile", "steep", "gentle", "dark", "bright", "long", "short", "high"]
SIZE = ["small", "large", "medium-sized", "busy", "quiet", "historic", "prosperous", "modest"]
TRADES = ["timber", "wool", "salt", "fish", "grain", "iron", "copper", "wine", "silk", "leather", "cloth",
          "paper", "glass", "stone", "coal"]
SECTORS = ["farming", "fishing", "tourism", "education", "manufacturing", "forestry", "trade", "shipping",
           "health care", "public service", "construction", "mining"]
MATERIALS = ["wooden", "stone", "brick", "timber-framed", "painted", "half-timbered", "granite", "limestone"]
DOCUMENTS = ["charter", "letter", "tax record", "church register", "royal decree", "map", "chronicle"]
INSTITUTIONS = ["bishop", "monastery", "duke", "archbishop", "royal family", "abbey", "city council"]
FESTIVALS = ["music", "folk", "harvest", "film", "jazz", "boat", "flower", "summer", "theatre", "food"]
OBJECTS = ["paintings", "silver cups", "carved figures", "old books", "coins", "maps", "tapestries",
           "stained glass windows", "wooden statues"]
CLIMATES = ["mild", "cool", "temperate", "dry", "wet", "continental", "maritime"]
SEASONS = ["warm summers and cold winters", "short summers and long winters", "mild winters and cool summers",
           "dry summers and wet winters", "hot summers and mild winters"]
GOODS = ["timber", "grain", "salt", "coal", "wine", "stone", "iron ore", "wool", "cattle", "fruit"]
ANIMALS = ["birds", "fish", "insects", "frogs", "otters", "beavers", "water plants", "ducks", "trout",
           "salmon"]
FIELDS = ["fields", "meadows", "farms", "villages", "marshes", "low hills", "pastures"]
WATER = ["clear and cold", "brown and slow", "fast and shallow", "deep and calm", "cold and clean"]
MOUNTAINS = [a + b for a in ["Gran", "Hal", "Ir", "Kel", "Mor", "Tor", "Vel"] for b in ["dal", "fjell", "berg", "ridge"]]
PROFESSIONS = {
    "painter": ("landscapes of the coast", "paintings", "painters", "art"),
    "composer": ("songs for voice and piano", "scores", "composers", "music"),
    "botanist": ("the plants of the mountains", "notebooks", "botanists", "botany"),
    "engineer": ("bridges and railways", "drawings", "engineers", "engineering"),
    "writer": ("novels about village life", "letters", "writers", "literature"),
    "astronomer": ("the motion of comets", "observations", "astronomers", "astronomy"),
    "architect": ("churches and public buildings", "plans", "architects", "architecture"),
    "historian": ("the history of the region", "manuscripts", "historians", "history"),
    "physician": ("the treatment of fever", "records", "physicians", "medicine"),
}
CITY_PLACES = ["museum", "library", "archive", "gallery"]
COLOURS = ["grey", "brown", "red", "black", "white", "yellow", "green", "blue", "spotted", "striped"]
BIRDS = ["heron", "warbler", "finch", "plover", "swallow", "owl", "lark", "tern", "woodpecker", "thrush",
         "kingfisher", "sparrow"]
HABITATS = ["forests", "wetlands", "river valleys", "coastal marshes", "mountain meadows", "open grasslands",
            "reed beds", "old woodlands"]
FOODS = ["insects", "seeds", "small fish", "berries", "worms", "snails", "beetles", "spiders", "fruit"]
BODY = ["back", "head", "wings", "tail", "breast", "neck"]
NEST = ["grass", "moss", "twigs", "mud", "leaves", "feathers", "reeds"]
SOUNDS = ["whistle", "song", "call", "trill", "cry"]
BUILDINGS = ["castle", "church", "bridge", "town hall", "lighthouse", "manor house", "cathedral", "mill"]
STYLES = ["Gothic", "Baroque", "Romanesque", "Renaissance", "classical", "neo-Gothic", "modernist"]
DECORATIONS = ["painted ceilings", "carved wooden panels", "marble columns", "tall windows", "old tapestries",
               "a large fireplace"]
LATER_USES = ["school", "hospital", "prison", "warehouse", "barracks", "museum", "library", "hotel"]
VIEWS = ["the river valley", "the old town", "the harbour", "the mountains", "the surrounding farmland",
         "the lake"]
SUBJECTS = ["mathematics", "law", "medicine", "history", "painting", "music", "chemistry", "physics",
            "philosophy", "languages"]


def _town(rng):
    return rng.choice(SYLLABLES_A) + rng.choice(SYLLABLES_B)


def _river(rng):
    return rng.choice(RIVER_A) + rng.choice(RIVER_B)


def _century(rng):
    return rng.choice(["twelfth", "thirteenth", "fourteenth", "fifteenth", "sixteenth", "seventeenth",
                       "eighteenth", "nineteenth", "twentieth"])


def _year(rng, lo=1200, hi=1990):
    return str(rng.randint(lo, hi))


def _small(rng):
    return rng.choice(["two", "three", "four", "five", "six", "seven", "eight"])


class Topic:
    """Holds the entity slots of one article so its sentences stay consistent."""

    def __init__(self, rng, kind):
        self.rng = rng
        self.kind = kind
        self.used = set()
        r = rng
        self.s = {
            "Town": _town(r), "Town2": _town(r), "City": _town(r), "City2": _town(r),
            "River": _river(r), "River2": _river(r), "country": r.choice(COUNTRIES),
            "country2": r.choice(COUNTRIES), "nationality": r.choice(NATIONALITIES),
            "mountains": r.choice(MOUNTAINS),
        }
        female = r.random() < 0.5
        self.s.update({
            "First": r.choice(FIRST_F if female else FIRST_M), "Last": r.choice(LAST),
            "First2": r.choice(FIRST_M if female else FIRST_F), "Last2": r.choice(LAST),
            "he": "she" if female else "he", "He": "She" if female else "He",
            "his": "her" if female else "his", "His": "Her" if female else "His",
        })
        prof = r.choice(sorted(PROFESSIONS))
        topic, works, people, field = PROFESSIONS[prof]
        self.s.update({"profession": prof, "work_topic": topic, "works": works, "professionals": people,
                       "field": field})
        self.s.update({"colour": r.choice(COLOURS), "bird": r.choice(BIRDS), "building": r.choice(BUILDINGS),
                       "style": r.choice(STYLES), "trade": r.choice(TRADES)})

    def fill(self, template):
        r = self.rng
        dyn = {
            "adj": r.choice(ADJ), "adj2": r.choice(ADJ), "size": r.choice(SIZE), "region": r.choice(REGIONS),
            "direction": r.choice(DIRECTIONS), "year": _year(r), "year2": _year(r, 1500, 2015),
            "century": _century(r), "small": _small(r), "number": f"{r.randint(2, 90)},{r.randint(100, 999)}",
            "rain": str(r.randint(4, 15) * 100), "length": str(r.randint(40, 900)),
            "height": f"{r.randint(1, 2)},{r.randint(100, 999)}", "area": f"{r.randint(1, 40)},{r.randint(100, 999)}",
            "material": r.choice(MATERIALS), "document": r.choice(DOCUMENTS), "institution": r.choice(INSTITUTIONS),
            "sector": r.choice(SECTORS), "sector2": r.choice(SECTORS), "saint": r.choice(SAINTS),
            "festival": r.choice(FESTIVALS), "objects": r.choice(OBJECTS), "climate": r.choice(CLIMATES),
            "seasons": r.choice(SEASONS), "goods": r.choice(GOODS), "goods2": r.choice(GOODS),
            "animals": r.choice(ANIMALS), "fields": r.choice(FIELDS), "water": r.choice(WATER),
            "subject": r.choice(SUBJECTS), "place": r.choice(CITY_PLACES), "age": str(r.randint(45, 92)),
            "cm": str(r.randint(9, 60)), "colour2": r.choice(COLOURS), "body": r.choice(BODY),
            "food": r.choice(FOODS), "food2": r.choice(FOODS), "nest": r.choice(NEST), "nest2": r.choice(NEST),
            "habitat": r.choice(HABITATS), "habitat2": r.choice(HABITATS), "sound": r.choice(SOUNDS),
            "decoration": r.choice(DECORATIONS), "later_use": r.choice(LATER_USES), "view": r.choice(VIEWS),
            "metres": str(r.randint(12, 140)), "goods3": r.choice(GOODS),
        }
        return template.format(**self.s, **dyn)


TEMPLATES = {
    "town": [
        "{Town} is a {size} town in the {region} of {country}, on the bank of the {River} river.",
        "The town was first mentioned in a {document} from {year}, when it belonged to the {institution} of {Town2}.",
        "During the {century} century the town grew quickly because of the {trade} trade and the new road to {Town2}.",
        "Its old market square is surrounded by {material} houses that were built after a great fire in {year}.",
        "Today the town has a population of about {number} people, and most of them work in {sector} or {sector2}.",
        "The parish church of {saint} contains an {adj} altar and a collection of {objects} from the {century} century.",
        "Every summer the town holds a {festival} festival that attracts visitors from all over {country}.",
        "The local museum describes the history of the {trade} trade and the life of the people who lived in the valley.",
        "A {adj} stone bridge with {small} arches crosses the river near the old mill.",
        "The climate is {climate}, with {seasons} and about {rain} millimetres of rain in a typical year.",
        "In {year} the town received a new school, which is still used by the children of the area.",
        "The railway reached {Town} in {year2}, and the old harbour lost much of its importance.",
        "Many of the older buildings were damaged in the war, but most of them have since been repaired.",
        "The town is twinned with {Town2}, a {size} town in the {region} of {country2}.",
        "There is a {adj} park on the edge of the town where people walk in the evening.",
        "The nearest city is {City}, which lies about {length} kilometres to the {direction}.",
    ],
    "river": [
        "The {River} is a river in {country} that flows for about {length} kilometres before it joins the {River2}.",
        "It rises in the {mountains} mountains at a height of {height} metres and runs mostly to the {direction}.",
        "Several {size} towns, including {Town} and {Town2}, grew up along its banks during the {century} century.",
        "The river was used to carry {goods} and {goods2} until the railway was built in {year2}.",
        "Its basin covers an area of {area} square kilometres and is home to many kinds of {animals}.",
        "A series of dams was built on the river between {year} and {year2} to produce electricity for the region.",
        "The water is {water}, and in spring the river often floods the {fields} near its mouth.",
        "The largest bridge over the {River} was opened in {year2} and is used by the main road to {City}.",
        "In the {century} century the river formed the border between {country} and {country2}.",
        "Fishing in the river was an important source of food for the people of the valley.",
        "The valley of the {River} is known for its {adj} villages and its old {material} churches.",
        "A long walking path follows the river from its source to the sea.",
        "The name of the river comes from an old word that means water or stream.",
        "Boats can travel on the lower part of the river as far as {Town}.",
    ],
    "person": [
        "{First} {Last} was a {nationality} {profession} who was born in {Town} in {year}.",
        "{He} studied {subject} at the university of {City} and later worked as a teacher in {Town2}.",
        "{He} is best known for {his} work on {work_topic}, which was published in {year2}.",
        "In {year2} {he} moved to {City2}, where {he} spent the rest of {his} life.",
        "Many of {his} {works} are now kept in the national {place} in {City}.",
        "{He} married {First2} {Last2}, and they had {small} children.",
        "Although {his} ideas were not widely accepted at first, they had a strong influence on later {professionals}.",
        "{He} died in {City2} at the age of {age} and was buried near the church of {saint}.",
        "As a young man {he} travelled through {country2} and wrote about what {he} saw there.",
        "{His} father was a {trade} merchant, and {his} mother came from a family of farmers.",
        "{He} was a member of the royal society of {field} for more than twenty years.",
        "A street in {Town} and a school in {City} are named after {First} {Last}.",
        "{His} most important {works} were written during the years {he} spent in {City2}.",
        "{He} corresponded with many of the leading {professionals} of {his} time.",
        "In {his} later years {he} spent much of {his} time teaching young students.",
    ],
    "bird": [
        "The {colour} {bird} is a species of bird found in the {habitat} of {country}.",
        "Adults are about {cm} centimetres long and have {colour2} feathers on the {body}.",
        "It feeds mainly on {food} and {food2}, which it finds on the ground or in shallow water.",
        "The female lays {small} eggs in a nest made of {nest} and {nest2}.",
        "During the winter many of the birds move to the {direction} in search of food.",
        "The species is common in most of its range, but it has become rare in places where the {habitat2} have been cleared.",
        "Its call is a {adj} {sound} that can be heard from a long distance.",
        "Both parents feed the young birds until they are able to fly.",
        "The {bird} was first described by {First} {Last} in {year2}.",
        "It is often seen near rivers and lakes in the early morning.",
        "The young birds leave the nest after about {small} weeks.",
        "In some parts of {country} the bird is protected by law.",
        "The male is slightly larger than the female and has a brighter {body}.",
    ],
    "building": [
        "The {building} of {Town} is a {adj} building in {country} that was built between {year} and {year2}.",
        "It was designed by the architect {First} {Last} in the {style} style.",
        "The main hall is {metres} metres long and is decorated with {decoration}.",
        "After the war the building was used as a {later_use} for many years.",
        "It was restored in {year2} and has been open to the public since then.",
        "Visitors can climb the tower to see a view of {view}.",
        "The walls are made of {material} blocks that were brought from a quarry near {Town2}.",
        "A small garden behind the {building} is used for concerts in the summer.",
        "The building was damaged by a fire in the {century} century and was partly rebuilt.",
        "The {building} is one of the oldest buildings in the {region} of {country}.",
        "Inside there is a collection of {objects} that belonged to the family of the owner.",
        "The entrance is on the side of the building that faces the square.",
    ],
    "history": [
        "The battle of {Town} took place in {year} between the armies of {country} and {country2}.",
        "The treaty that ended the war was signed in {City} in the spring of {year}.",
        "After the war the region was ruled by the {institution} of {City} for almost a century.",
        "The {trade} trade brought great wealth to the merchants of {Town} in the {century} century.",
        "Many people left the valley during the famine and settled in {country2}.",
        "The old road from {Town} to {City} was used by traders and pilgrims for hundreds of years.",
        "In {year} a new law gave the farmers the right to own the land they worked.",
        "The first newspaper in the region was printed in {Town2} in {year2}.",
        "The population of the region fell sharply after the plague of {year}.",
        "The ruins of an old fort can still be seen on the hill above the town.",
        "Records from this period describe a {adj} winter in which the river froze for months.",
        "The union between the two towns was agreed in {year2} after a long debate.",
    ],
}
KINDS = sorted(TEMPLATES)

OPENERS = ["However, ", "In fact, ", "Today, ", "As a result, ", "According to local records, ", "Even so, ",
           "At that time, ", "Later, ", "In general, ", "For this reason, ", "Since then, ", "Before that, "]
LOWERABLE = {"The", "A", "An", "It", "Its", "In", "During", "After", "Many", "Every", "Both", "Adults",
             "Visitors", "Inside", "Fishing", "Records", "Today", "There", "Several", "Although", "As"}
APPOSITIVES = ["a well-known place", "an old settlement", "the local centre", "as noted above", "then a village"]
ASIDES = ["(see below)", "(in the old sense)", "(according to one account)", "(now a listed site)",
          "(at least in part)", "(as it was then known)", "(or so it is said)", "(still visible today)",
          "(disputed)", "(citation needed)", "(by most estimates)", "(see map)", "(later rebuilt)",
          "(records vary)", "(not confirmed)", "(briefly)", "(twice)", "(mostly)", "(c. 1900)",
          "(approx.)", "(then still young)", "(see image)", "(in Latin: aqua)", "(unpublished)"]
ENDINGS = ["; this is well documented.", " (see also: references).", ", as noted in the records.",
           "; details are uncertain.", " (source: parish archive).", "; see the main article.",
           ", or so the chroniclers claimed.", " (ibid., p. 12).", "; the exact date is unknown.",
           ", at least according to tradition.", " (see notes).", "; sources disagree on this."]


def _fresh(rng, topic, pool):
    choices = [x for x in pool if x not in topic.used]
    pick = rng.choice(choices or pool)
    topic.used.add(pick)
    return pick


def punctuate(rng, topic, text):
    """Adds the commas and brackets that encyclopedic prose carries."""
    words = text[:-1].split(" ")
    changed = False
    if rng.random() < 0.35 and words[0] in LOWERABLE:
        words[0] = _fresh(rng, topic, OPENERS) + words[0].lower()
        changed = True
    if rng.random() < 0.4:
        for i, w in enumerate(words):
            if w.isdigit() and len(w) == 4:
                words[i] = f"{w} (c. {int(w) - rng.randint(1, 9)}-{w[-2:]})"
                changed = True
                break
    if rng.random() < 0.3:
        for i, w in enumerate(words[:-1]):
            if w in (topic.s["Town"], topic.s["River"], topic.s["Town2"]):
                words[i] = f"{w}, {_fresh(rng, topic, APPOSITIVES)},"
                changed = True
                break
    breaks = [i for i, w in enumerate(words) if w in ("in", "on", "near", "from", "after", "until") and i > 2]
    if breaks and (rng.random() < 0.4 or not changed):
        words[rng.choice(breaks) - 1] += " " + _fresh(rng, topic, ASIDES)
        changed = True
    if changed and rng.random() < 0.6:
        end = "."
    else:
        end = _fresh(rng, topic, ENDINGS)
    return " ".join(words) + end


def sentence(rng, topic=None):
    topic = topic or Topic(rng, rng.choice(KINDS))
    return punctuate(rng, topic, topic.fill(rng.choice(TEMPLATES[topic.kind])))


def article(rng, kind=None, paragraphs=(3, 7), sentences=(2, 5)):
    """Returns (title, list of paragraph strings) about one topic."""
    topic = Topic(rng, kind or rng.choice(KINDS))
    templates = TEMPLATES[topic.kind]
    order = list(range(len(templates)))
    rng.shuffle(order)
    # First template introduces the subject.
    order.remove(0)
    order.insert(0, 0)
    paras = []
    for _ in range(rng.randint(*paragraphs)):
        if not order:
            break
        sents = []
        for _ in range(rng.randint(*sentences)):
            if order:
                sents.append(punctuate(rng, topic, topic.fill(templates[order.pop(0)])))
        paras.append(" ".join(sents))
    title = {
        "town": topic.s["Town"], "river": topic.s["River"] + " river",
        "person": topic.s["First"] + " " + topic.s["Last"],
        "bird": "The " + topic.s["colour"] + " " + topic.s["bird"],
        "building": "The " + topic.s["building"] + " of " + topic.s["Town"],
        "history": "History of " + topic.s["Town"],
    }[topic.kind]
    return title, paras, topic
