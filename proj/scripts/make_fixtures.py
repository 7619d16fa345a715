#!/usr/bin/env python3
"""Regenerates everything under data/ from fixed seeds.

Outputs:
  data/corpus/wiki_sample.txt      language-model corpus, one sentence per line
  data/quality/{positive,negative}.txt
  data/wordlists/{stop,flagged,spam}.txt
  data/images/                     image files plus index.tsv (url -> file)
  data/pages/                      stand-alone HTML pages plus metadata.tsv
  data/fixtures/crawl.warc.gz      50-page crawl used by the end-to-end tests
  data/fixtures/optout.txt, run_all.json
"""

import datetime
import gzip
import hashlib
import html
import io
import json
import random
import re
import shutil
import uuid
from pathlib import Path

from PIL import Image

import prose

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"

# ---------------------------------------------------------------- word lists

STOP_WORDS = """a about above across after again against all almost along also although am among an and any
are around as at be because been before being below between both but by can could did do does doing down
during each either else even ever every few for from further had has have having he her here hers herself him
himself his how however i if in into is it its itself just least less many may me might more most much must my
myself neither no nor not now of off often on once only onto or other others our ours ourselves out over own per
quite rather same several she should since so some still such than that the their theirs them themselves then
there therefore these they this those though through thus to together too toward towards under until up upon
us very was we well were what whatever when where whether which while who whom whose why will with within
without would yet you your yours yourself yourselves""".split()

FLAGGED_WORDS = """porn porno pornography pornographic xxx sex sexy sexual nude nudes nudity naked erotic erotica
escort escorts hentai milf nsfw orgasm fetish stripper camgirl bdsm boobs horny slut whore dildo vibrator
masturbation threesome hardcore playboy onlyfans""".split()

SPAM_WORDS = """share shares tweet retweet facebook twitter pinterest linkedin whatsapp reddit instagram tumblr
telegram email subscribe unsubscribe newsletter cookie cookies comment comments reply replies login signup
sign-up click advertisement sponsored loading copyright""".split()


def write_lines(path, lines, header=None):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        if header:
            f.write(f"# {header}\n")
        for line in lines:
            f.write(line + "\n")


# ------------------------------------------------------------------ corpora

def make_corpus():
    rng = random.Random(11)
    lines = []
    while len(lines) < 12000:
        _, paras, _ = prose.article(rng, paragraphs=(2, 5), sentences=(2, 4))
        for p in paras:
            # Abbreviations such as "c. 1513" or "p. 12" are followed by a non-capital.
            for s in re.split(r"(?<=\.)\s+(?=[A-Z])", p):
                s = s.strip()
                if s:
                    lines.append(s if s.endswith(".") else s + ".")
    write_lines(DATA / "corpus" / "wiki_sample.txt", lines[:12000])


SPAM_VOCAB = """buy cheap best price discount online free shipping deal deals offer sale casino bonus win prize
click now limited today order replica watches loans credit bitcoin earn money fast work home pills pharmacy
guaranteed amazing exclusive visit website call lowest rates apply instant approval download crack serial
keygen""".split()
MENU_VOCAB = """Home About Contact Blog Shop Cart Login Register Privacy Terms FAQ Careers Press Sitemap Search
Menu Next Previous Page Archives Categories Tags Recent Posts Popular Newsletter Account Wishlist Checkout
Help Support English Deutsch Français""".split()
SEO_SUFFIX = ["hotels", "restaurants", "cheap flights", "weather", "map", "car rental", "apartments",
              "things to do", "jobs", "real estate", "nightlife", "parking", "tours", "deals"]
COOKIE_LINES = [
    "We use cookies to improve your experience on our website.",
    "By continuing to browse you accept our use of cookies.",
    "Accept all cookies or manage your preferences.",
    "This site uses cookies for analytics and personalised content.",
    "Read our privacy policy and cookie policy for more information.",
]


def content_vocabulary():
    rng = random.Random(5)
    words = set()
    for _ in range(400):
        for w in prose.sentence(rng).split():
            w = w.strip(".,;:()").lower()
            if w and w not in STOP_WORDS:
                words.add(w)
    return sorted(words)


def noise_document(rng, vocab):
    kind = rng.randrange(5)
    if kind == 0:
        return " ".join(rng.choice(SPAM_VOCAB) for _ in range(rng.randint(20, 70)))
    if kind == 1:
        return " ".join(rng.choice(MENU_VOCAB) for _ in range(rng.randint(20, 60)))
    if kind == 2:
        return " ".join(rng.choice(vocab) for _ in range(rng.randint(20, 70)))
    if kind == 3:
        town = prose._town(rng)
        return " ".join(f"{town} {rng.choice(SEO_SUFFIX)}" for _ in range(rng.randint(8, 25)))
    return " ".join(rng.choice(COOKIE_LINES) for _ in range(rng.randint(3, 8)))


def make_quality():
    rng = random.Random(23)
    pos = []
    while len(pos) < 1000:
        _, paras, _ = prose.article(rng, paragraphs=(1, 3), sentences=(2, 5))
        pos.append(" ".join(paras))
    vocab = content_vocabulary()
    neg = [noise_document(rng, vocab) for _ in range(1000)]
    write_lines(DATA / "quality" / "positive.txt", pos)
    write_lines(DATA / "quality" / "negative.txt", neg)


# ------------------------------------------------------------------- images

class ImageStore:
    """Writes image files and records url -> file in index.tsv."""

    def __init__(self, root):
        self.root = root
        self.index = {}
        if root.exists():
            shutil.rmtree(root)
        (root / "files").mkdir(parents=True)

    def add(self, url, w, h, fmt="jpg", seed=0):
        if url in self.index:
            return url
        name = hashlib.sha1(url.encode()).hexdigest()[:16] + "." + fmt
        rng = random.Random(seed or url)
        colour = (rng.randrange(256), rng.randrange(256), rng.randrange(256))
        img = Image.new("RGB", (w, h), colour)
        path = self.root / "files" / name
        if fmt == "jpg":
            img.save(path, "JPEG", quality=20)
        elif fmt == "png":
            img.save(path, "PNG", optimize=True)
        elif fmt == "webp":
            img.save(path, "WEBP", quality=20)
        elif fmt == "gif":
            img.convert("P").save(path, "GIF")
        else:
            raise ValueError(fmt)
        self.index[url] = "files/" + name
        return url

    def write_index(self):
        write_lines(self.root / "index.tsv", [f"{u}\t{f}" for u, f in sorted(self.index.items())],
                    header="image url<TAB>file relative to this directory")


PHOTO_SIZES = [(1024, 768), (800, 600), (1200, 800), (640, 480), (900, 1200), (1280, 960), (768, 1024),
               (1600, 1067)]

# ---------------------------------------------------------------- boilerplate


def css_blob(rng, rules):
    out = []
    props = ["color", "background-color", "margin", "padding", "font-size", "line-height", "border",
             "display", "width", "max-width", "box-shadow", "transition", "letter-spacing"]
    for i in range(rules):
        sel = rng.choice([".site-header", ".entry-content", ".widget", ".menu-item", ".btn", ".card", ".footer",
                          ".nav-link", ".post-meta", ".sidebar", ".comment", ".share"])
        decl = ";".join(
            f"{rng.choice(props)}:{rng.choice(['#%06x' % rng.randrange(1 << 24), f'{rng.randint(0, 48)}px', 'auto', 'inherit', '1px solid #%06x' % rng.randrange(1 << 24), 'flex', 'none', 'all .3s ease'])}"
            for _ in range(rng.randint(3, 8)))
        out.append(f"{sel}-{i} {rng.choice(['a', 'span', 'li', 'div', 'p'])}{{{decl}}}")
    return "\n".join(out)


def js_blob(rng, chunks):
    names = ["e", "t", "n", "r", "o", "i", "a", "s", "c", "u", "l", "d"]
    out = ["!function(e){var t={};function n(r){if(t[r])return t[r].exports;var o=t[r]={i:r,l:!1,exports:{}};"
           "return e[r].call(o.exports,o,o.exports,n),o.l=!0,o.exports}n.m=e,n.c=t}(["]
    for i in range(chunks):
        a, b, c = rng.choice(names), rng.choice(names), rng.choice(names)
        out.append(
            f"function(e,t,n){{\"use strict\";var {a}=n({rng.randint(0, 999)}),{b}=n.n({a});"
            f"t.default=function({c}){{return {b}()({c}).filter(function(x){{return x.id!=={rng.randint(0, 9999)}}})"
            f".map(function(x){{return x.value*{rng.randint(2, 99)}}})}};window.__cfg_{i}="
            f"{{\"k\":\"{hashlib.md5(str(rng.random()).encode()).hexdigest()}\",\"v\":{rng.randint(0, 1 << 20)}}}}},")
    out.append("]);")
    return "".join(out)


def meta_block(rng, title, url, site_name):
    desc = html.escape(title + " - " + site_name)
    tags = [
        '<meta charset="utf-8">',
        '<meta name="viewport" content="width=device-width, initial-scale=1">',
        f'<meta name="description" content="{desc}">',
        f'<meta property="og:title" content="{html.escape(title)}">',
        f'<meta property="og:url" content="{url}">',
        f'<meta property="og:site_name" content="{site_name}">',
        '<meta property="og:type" content="article">',
        '<meta name="twitter:card" content="summary_large_image">',
        f'<meta name="generator" content="WordPress {rng.randint(4, 6)}.{rng.randint(0, 9)}">',
        f'<link rel="canonical" href="{url}">',
    ]
    for i in range(rng.randint(4, 9)):
        tags.append(f'<link rel="stylesheet" id="style-{i}-css" href="/assets/css/bundle-{i}.css?ver={rng.randint(100, 999)}" media="all">')
    for i in range(rng.randint(2, 5)):
        tags.append(f'<link rel="preload" href="/assets/fonts/font-{i}.woff2" as="font" type="font/woff2" crossorigin>')
    ld = ('{"@context":"https://schema.org","@type":"Article","headline":"%s","publisher":{"@type":"Organization",'
          '"name":"%s"}}' % (html.escape(title), site_name))
    tags.append(f'<script type="application/ld+json">{ld}</script>')
    return "\n".join(tags)


SVG_ICON = ('<svg class="icon" width="24" height="24" viewBox="0 0 24 24" aria-hidden="true"><path d="M12 2C6.5 2 2 '
            '6.5 2 12s4.5 10 10 10 10-4.5 10-10S17.5 2 12 2zm0 18c-4.4 0-8-3.6-8-8s3.6-8 8-8 8 3.6 8 8-3.6 8-8 8z">'
            '</path></svg>')

MENU = ["Home", "News", "History", "Places", "People", "Nature", "Events", "Gallery", "Archive", "Shop",
        "About us", "Contact", "Support us", "Newsletter", "Login"]

COMMENTS = ["Great article, thanks for sharing!", "I visited last summer and loved it.",
            "Does anyone know when the museum opens?", "Very interesting read.",
            "My grandmother was born there!", "Thanks, this was really helpful for my school project."]


def nav(rng, ident):
    items = "".join(f'<li class="menu-item menu-item-{i}"><a href="/{m.lower().replace(" ", "-")}/">{m}</a></li>'
                    for i, m in enumerate(MENU[: rng.randint(8, len(MENU))]))
    return f'<div id="{ident}" class="main-navigation"><ul class="menu">{items}</ul></div>'


def share_bar():
    nets = ["Facebook", "Twitter", "Pinterest", "Email"]
    links = "".join(f'<a class="share-{n.lower()}" href="#" rel="nofollow">{SVG_ICON}<span>Share on {n}</span></a>'
                    for n in nets)
    return f'<div class="share-buttons"><p>Share this article: {links}</p></div>'


def cookie_banner():
    return ('<div class="cookie-notice" role="dialog"><p>We use cookies to improve your experience. '
            'By continuing to browse you accept our cookie policy.</p><button class="accept">Accept</button>'
            '<button class="decline">Decline</button></div>')


def img_tag(img, layout, lazy=False):
    w, h = img["w"], img["h"]
    alt = html.escape(img.get("alt", ""))
    src = img["src"]
    if lazy:
        return (f'<img src="data:image/gif;base64,R0lGODlhAQABAAAAACw=" data-src="{src}" width="{w}" height="{h}" '
                f'alt="{alt}" class="lazyload" loading="lazy">')
    extra = ""
    if layout == "blog":
        extra = f' srcset="{src} {w}w, {src}?resize=300 300w" sizes="(max-width: {w}px) 100vw, {w}px"'
    return f'<img src="{src}" width="{w}" height="{h}" alt="{alt}" class="wp-image attachment-full"{extra} decoding="async">'


def figure(img, layout, lazy=False):
    cap = html.escape(img.get("caption", ""))
    inner = img_tag(img, layout, lazy)
    if cap:
        return f'<figure class="wp-block-image size-large">{inner}<figcaption>{cap}</figcaption></figure>'
    return f'<figure class="wp-block-image">{inner}</figure>'


def emphasize(rng, para):
    words = para.split(" ")
    if len(words) > 8 and rng.random() < 0.5:
        i = rng.randrange(len(words) - 3)
        words[i] = f'<a href="/tag/{words[i].strip(".,").lower()}/" title="More">{words[i]}'
        words[i + 1] = words[i + 1] + "</a>"
    if len(words) > 12 and rng.random() < 0.4:
        j = rng.randrange(len(words) - 2)
        words[j] = "<strong>" + words[j]
        words[j + 1] = words[j + 1] + "</strong>"
    return " ".join(words)


def body_html(rng, page, layout):
    """Interleaves paragraphs and images; images[i]['after'] is a paragraph index."""
    parts = []
    by_pos = {}
    for img in page["images"]:
        by_pos.setdefault(img["after"], []).append(img)
    for img in by_pos.get(-1, []):
        parts.append(figure(img, layout, img.get("lazy", False)))
    for i, p in enumerate(page["paragraphs"]):
        text = emphasize(rng, html.escape(p))
        if layout == "forum":
            parts.append(f'<div class="post-text">{text}</div>')
        else:
            parts.append(f"<p>{text}</p>")
        if page.get("more_link_after") == i:
            parts.append(f'<p><a href="{page["url"]}#more" class="more-link">Continue reading <span class="screen-reader-text">{html.escape(page["title"])}</span></a></p>')
        for img in by_pos.get(i, []):
            parts.append(figure(img, layout, img.get("lazy", False)))
    if page.get("bio"):
        parts.append(f'<div class="author-bio"><p>{html.escape(page["bio"])}</p></div>')
    return "\n".join(parts)


def render(rng, site, page):
    layout = site["layout"]
    title = page["title"]
    head = (f"<!DOCTYPE html>\n<html lang=\"{page.get('lang', 'en')}\">\n<head>\n{meta_block(rng, title, page['url'], site['name'])}\n"
            f"<title>{html.escape(title)} | {site['name']}</title>\n"
            f"<style id=\"global-styles-inline-css\">\n{css_blob(rng, rng.randint(140, 260))}\n</style>\n"
            f"<script>window.dataLayer=window.dataLayer||[];function gtag(){{dataLayer.push(arguments)}}gtag('js',new Date());"
            f"gtag('config','G-{rng.randint(100000, 999999)}');</script>\n"
            f"<script>{js_blob(rng, rng.randint(25, 55))}</script>\n</head>\n")
    logo = {"src": site["logo"], "w": 240, "h": 60, "alt": site["name"]}
    header = (f'<div id="header" class="site-header"><div class="site-branding"><a href="/" rel="home">{img_tag(logo, "plain")}</a>'
              f'<p class="site-title">{site["name"]}</p><p class="site-description">{site["tagline"]}</p></div>'
              f'{nav(rng, "site-navigation")}<form role="search" class="search-form" action="/"><input type="search" name="s" '
              f'placeholder="Search"><button type="submit">{SVG_ICON}</button></form></div>')
    crumbs = (f'<div class="breadcrumbs" date="{page["date"]}"><span><a href="/">Home</a></span> &raquo; '
              f'<span>{html.escape(title)}</span></div>')
    body = body_html(rng, page, layout)
    widgets = "".join(
        f'<section class="widget widget_{w}"><h2 class="widget-title">{w.title()}</h2><ul>'
        + "".join(f'<li><a href="/{w}/{k}/">{w.title()} item {k}</a></li>' for k in range(rng.randint(4, 9)))
        + "</ul></section>" for w in ["recent-posts", "categories", "archives", "tags"])
    widget_img = {"src": site["widget_img"], "w": 300, "h": 250, "alt": "weather"}
    sidebar = (f'<aside id="secondary" class="widget-area">{widgets}<div class="widget widget_media">'
               f'{img_tag(widget_img, "plain")}</div><iframe src="https://ads.example-adnetwork.com/slot/{rng.randint(1, 99)}" '
               f'width="300" height="600"></iframe></aside>')
    related = ""
    if page.get("related"):
        cards = "".join(f'<div class="related-card"><a href="{r["href"]}">{img_tag(r["thumb"], "plain")}'
                        f'<span>{html.escape(r["title"])}</span></a></div>' for r in page["related"])
        related = f'<div class="related-posts"><h3>You may also like</h3>{cards}</div>'
    comments = ""
    if layout in ("blog", "news"):
        cs = "".join(f'<li class="comment"><div class="comment-author">{rng.choice(prose.FIRST_F + prose.FIRST_M)}</div>'
                     f'<div class="comment-body"><p>{html.escape(rng.choice(COMMENTS))}</p></div></li>'
                     for _ in range(rng.randint(0, 3)))
        comments = (f'<div id="comments" class="comments-area"><ol class="comment-list">{cs}</ol>'
                    f'<form id="commentform"><textarea name="comment"></textarea><input type="submit" value="Post Comment"></form></div>')
    footer = (f'<div id="footer" class="site-footer"><div class="footer-widgets">{nav(rng, "footer-menu")}</div>'
              f'<div class="site-info">&copy; {site["name"]} 2023. All rights reserved.</div></div>')
    meta = (f'<div class="entry-meta"><span class="posted-on">Posted on <time datetime="{page["date"]}">{page["date"]}</time></span>'
            f' by <span class="author"><a href="/author/{site["author"].lower()}/">{site["author"]}</a></span></div>')
    if layout == "wiki":
        infobox = ('<table class="infobox"><tbody>' + "".join(
            f"<tr><th>{k}</th><td>{rng.randint(1000, 9999)}</td></tr>" for k in ["Area", "Elevation", "Population", "Founded"])
                   + "</tbody></table>")
        toc = '<div id="toc" class="toc"><ul>' + "".join(
            f'<li><a href="#s{k}">{k + 1} Section</a></li>' for k in range(len(page["paragraphs"]))) + "</ul></div>"
        refs = '<div class="references"><ol>' + "".join(
            f'<li><cite>{rng.choice(prose.LAST)}, {prose._town(rng)} ({rng.randint(1900, 2020)}), p. {rng.randint(1, 400)}.</cite></li>'
            for _ in range(rng.randint(3, 8))) + "</ol></div>"
        article = (f'<div id="content" class="mw-body"><h1 id="firstHeading">{html.escape(title)}</h1>{infobox}{toc}'
                   f'<div class="mw-parser-output">{body}</div>{refs}</div>')
    elif layout == "forum":
        article = (f'<div class="thread"><h1 class="thread-title">{html.escape(title)}</h1>'
                   f'<div class="post"><div class="postbit-user">{site["author"]}</div>{body}</div>'
                   f'<div class="pagination"><a href="?page=2">Next</a></div></div>')
    else:
        article = (f'<main id="main" class="site-main"><article class="post type-post"><header class="entry-header">'
                   f'<h1 class="entry-title">{html.escape(title)}</h1>{meta}</header>'
                   f'<div class="entry-content">{body}</div>{share_bar() if layout == "blog" else ""}</article>'
                   f'{related}{comments}</main>')
    tail = f'<script>{js_blob(rng, rng.randint(10, 30))}</script>'
    return (head + f'<body class="{layout} single">\n<a class="skip-link" href="#main">Skip to content</a>\n'
            f"{header}\n{crumbs}\n<div class=\"site-content\">\n{article}\n{sidebar}\n</div>\n{footer}\n"
            f"{cookie_banner()}\n{tail}\n</body>\n</html>\n")


# ------------------------------------------------------------------- sites

SITES = [
    dict(domain="www.valleychronicle.org", name="Valley Chronicle", layout="blog", author="Admin",
         tagline="Stories from the old valley"),
    dict(domain="www.northgazette.com", name="North Gazette", layout="news", author="Editor",
         tagline="Regional news"),
    dict(domain="www.riverwiki.net", name="RiverWiki", layout="wiki", author="Wiki", tagline="The river encyclopedia"),
    dict(domain="forum.birdwatchers.net", name="Birdwatchers Forum", layout="forum", author="Moderator",
         tagline="Discussion board"),
    dict(domain="www.heritagemuseum.org", name="Heritage Museum", layout="museum", author="Curator",
         tagline="Collections online"),
    dict(domain="www.oldbridges.info", name="Old Bridges", layout="blog", author="Editor", tagline="Bridges and roads"),
    dict(domain="www.travelnotes.eu", name="Travel Notes", layout="blog", author="Traveller", tagline="Notes from the road"),
    dict(domain="www.castleguide.net", name="Castle Guide", layout="wiki", author="Guide", tagline="Castles and manors"),
]
for s in SITES:
    s["logo"] = f"https://{s['domain']}/wp-content/themes/{s['layout']}/images/logo.png"
    s["widget_img"] = f"https://{s['domain']}/widgets/weather-widget-300x250.png"
    s["bio"] = ("The author of this page has lived in the valley for many years, and has written about the history "
                "of the region, its old towns and its rivers (see the main article).")

SHARED_STOCK = "https://cdn.stockimages.net/photos/landscape-river-0042.jpg"


def image_url(site, rng, slug, i, w, h, fmt):
    layout = site["layout"]
    d = site["domain"]
    if layout == "blog":
        return f"https://{d}/wp-content/uploads/2022/{rng.randint(1, 12):02d}/{slug}-{i}-{w}x{h}.{fmt}"
    if layout == "news":
        return f"https://cdn.{d.split('.', 1)[1]}/images/2023/{rng.randint(10000, 99999)}.{fmt}?w={w}"
    if layout == "wiki":
        return f"//upload.{d.split('.', 1)[1]}/thumb/{slug[0]}/{slug[:2]}/{slug}_{i}.{fmt}/{w}px-{slug}_{i}.{fmt}"
    if layout == "forum":
        return f"/attachments/{rng.randint(1000, 9999)}/{slug}-{i}.{fmt}"
    return f"../media/collection/{slug}-{i}.{fmt}"


def absolute(page_url, src):
    from urllib.parse import urljoin
    return urljoin(page_url, src)


def slugify(title):
    return "".join(c if c.isalnum() else "-" for c in title.lower()).strip("-")


def make_page(rng, site, store, when, *, kind=None, n_images=None, title=None, paragraphs=None, lang="en",
              extra_images=(), path=None, seed_url=None):
    if paragraphs is None:
        title, paragraphs, _ = prose.article(rng, kind, paragraphs=(4, 8), sentences=(3, 5))
    slug = slugify(title)
    url = seed_url or f"https://{site['domain']}/{path or ('2023/' + slug)}/"
    n = rng.randint(1, 4) if n_images is None else n_images
    images = []
    for i in range(n):
        w, h = rng.choice(PHOTO_SIZES)
        fmt = rng.choice(["jpg", "jpg", "jpg", "png", "webp"])
        src = image_url(site, rng, slug, i, w, h, fmt)
        store.add(absolute(url, src), w, h, fmt)
        images.append({"src": src, "w": w, "h": h, "alt": f"{title} {i + 1}",
                       "caption": f"View of {title}" if n < 10 and rng.random() < 0.5 else "",
                       "after": rng.randrange(len(paragraphs)), "lazy": rng.random() < 0.25})
    for e in extra_images:
        images.append(dict(e))
    page = {"url": url, "title": title, "paragraphs": paragraphs, "images": images, "lang": lang,
            "date": when.strftime("%Y-%m-%d"), "fetch_time": when}
    if site["layout"] in ("blog", "news") and rng.random() < 0.4:
        page["more_link_after"] = len(paragraphs) - 1
    if site["layout"] == "blog":
        page["bio"] = site["bio"]
        thumbs = []
        for k in range(3):
            turl = f"https://{site['domain']}/wp-content/uploads/thumbs/related-{rng.randint(100, 999)}-120x120.jpg"
            store.add(turl, 120, 120, "jpg")
            thumbs.append({"href": f"https://{site['domain']}/related-{k}/", "title": f"Related story {k + 1}",
                           "thumb": {"src": turl, "w": 120, "h": 120, "alt": ""}})
        page["related"] = thumbs
    return page


FRENCH = [
    "La rivière traverse une vallée étroite où se trouvent plusieurs villages anciens et des moulins à eau.",
    "Au dix-neuvième siècle, le commerce du bois et du sel a apporté une grande richesse aux marchands de la ville.",
    "Le pont de pierre, construit en 1742, possède cinq arches et relie les deux quartiers de la ville.",
    "Chaque été, un festival de musique attire des visiteurs de toute la région et de l'étranger.",
    "Les oiseaux qui vivent près de l'eau se nourrissent de petits poissons, d'insectes et de graines.",
    "L'église paroissiale contient un autel remarquable et une collection de peintures anciennes.",
]


def make_warc_pages(store):
    rng = random.Random(2023)
    base = datetime.datetime(2023, 2, 1, 8, 0, 0, tzinfo=datetime.timezone.utc)
    clock = [base]

    def tick():
        clock[0] += datetime.timedelta(minutes=rng.randint(20, 90))
        return clock[0]

    site = {s["domain"]: s for s in SITES}
    pages = []

    def add(s, **kw):
        p = make_page(rng, s, store, tick(), **kw)
        p["site"] = s
        pages.append(p)
        return p

    stock = {"src": SHARED_STOCK, "w": 1200, "h": 800, "alt": "River landscape", "caption": "", "after": 0}
    store.add(SHARED_STOCK, 1200, 800, "jpg")
    # Regular articles: 8 domains. The stock photo appears on twelve pages.
    counts = {"www.valleychronicle.org": 7, "www.northgazette.com": 6, "www.riverwiki.net": 5,
              "forum.birdwatchers.net": 4, "www.heritagemuseum.org": 4, "www.oldbridges.info": 4,
              "www.travelnotes.eu": 4, "www.castleguide.net": 5}
    stock_left = 12
    for domain, n in counts.items():
        for _ in range(n):
            extra = []
            if stock_left and rng.random() < 0.45:
                extra.append(stock)
                stock_left -= 1
            add(site[domain], extra_images=extra)
    # Top up the stock photo to exactly twelve pages.
    for p in pages:
        if stock_left == 0:
            break
        if all(i["src"] != SHARED_STOCK for i in p["images"]):
            p["images"].append(dict(stock))
            stock_left -= 1

    # Same URL recrawled later with the article largely rewritten.
    gz = site["www.northgazette.com"]
    first = pages[[p["site"] is gz for p in pages].index(True)]
    _, new_paras, _ = prose.article(rng, "town", paragraphs=(5, 7), sentences=(3, 5))
    later = dict(first)
    later.update(paragraphs=first["paragraphs"][:1] + new_paras, fetch_time=first["fetch_time"] + datetime.timedelta(days=90),
                 date=(first["fetch_time"] + datetime.timedelta(days=90)).strftime("%Y-%m-%d"),
                 images=[dict(i) for i in first["images"]])
    pages.append(later)

    # Syndicated copy of a Valley Chronicle article with a changed last sentence.
    vc = site["www.valleychronicle.org"]
    src = pages[[p["site"] is vc for p in pages].index(True)]
    copy_paras = list(src["paragraphs"])
    copy_paras[-1] = copy_paras[-1] + " This article first appeared in the Valley Chronicle."
    add(site["www.oldbridges.info"], title=src["title"], paragraphs=copy_paras, path="syndicated/" + slugify(src["title"]))

    # French article.
    fr = list(FRENCH)
    rng.shuffle(fr)
    add(site["www.riverwiki.net"], title="La rivière et la vallée", paragraphs=[" ".join(fr[:3]), " ".join(fr[3:])],
        lang="fr", path="fr/la-riviere")

    # Keyword-stuffed spam thread.
    spam = ["Buy cheap replica watches online now best price free shipping click here today."] * 8
    add(site["forum.birdwatchers.net"], title="Best deals", paragraphs=spam, path="threads/best-deals")

    # Tag archive page made of navigation text.
    nav_text = [" ".join(MENU_VOCAB[i:i + 12]) for i in range(0, 36, 12)]
    add(site["www.travelnotes.eu"], title="Tag archive", paragraphs=nav_text, path="tag/archive")

    # Article without any images.
    add(site["www.travelnotes.eu"], n_images=0)

    # Gallery with 35 photos.
    mu = site["www.heritagemuseum.org"]
    title, paras, _ = prose.article(rng, "building", paragraphs=(3, 4), sentences=(3, 4))
    gallery = add(mu, title=title + " gallery", paragraphs=paras, n_images=35, path="collection/gallery")

    # Two museum pages sharing one set of images; the later one survives.
    title_a, paras_a, _ = prose.article(rng, "history", paragraphs=(4, 5), sentences=(3, 4))
    title_b, paras_b, _ = prose.article(rng, "person", paragraphs=(4, 5), sentences=(3, 4))
    a = add(mu, title=title_a, paragraphs=paras_a, n_images=2, path="collection/item-a")
    shared = [dict(i) for i in a["images"]]
    for i in shared:
        i["src"] = absolute(a["url"], i["src"])
    b = add(mu, title=title_b, paragraphs=paras_b, n_images=0, path="collection/item-b")
    b["images"] = list(reversed([dict(i, after=min(i["after"], len(paras_b) - 1)) for i in shared]))

    # Castle guide page with NSFW-looking URL, opted-out image, GIF, banner and a missing file.
    cg = site["www.castleguide.net"]
    p = add(cg, n_images=2, path="castles/manor-house")
    specials = [
        ("https://img.castleguide.net/uploads/xxx-thumb-castle.jpg", 800, 600, "jpg"),
        ("https://img.castleguide.net/uploads/opted-out-tower.jpg", 1024, 768, "jpg"),
        ("https://img.castleguide.net/uploads/animated-flag.gif", 400, 300, "gif"),
        ("https://img.castleguide.net/uploads/wide-banner.jpg", 1600, 400, "jpg"),
    ]
    for k, (u, w, h, f) in enumerate(specials):
        store.add(u, w, h, f)
        p["images"].append({"src": u, "w": w, "h": h, "alt": "", "caption": "", "after": k % len(p["paragraphs"])})
    p["images"].append({"src": "https://img.castleguide.net/uploads/missing-photo.jpg", "w": 800, "h": 600, "alt": "",
                        "caption": "", "after": 0})
    # Short page with a single caption.
    add(site["www.travelnotes.eu"], title="Photo of the day", paragraphs=["Sunset over the harbour."], n_images=1,
        path="photo-of-the-day")

    assert len(pages) == 50, len(pages)
    pages.sort(key=lambda p: p["fetch_time"])
    return pages


# ---------------------------------------------------------------------- warc

def warc_record(headers, payload):
    head = "WARC/1.0\r\n" + "".join(f"{k}: {v}\r\n" for k, v in headers) + f"Content-Length: {len(payload)}\r\n\r\n"
    raw = head.encode() + payload + b"\r\n\r\n"
    buf = io.BytesIO()
    with gzip.GzipFile(fileobj=buf, mode="wb", mtime=0) as g:
        g.write(raw)
    return buf.getvalue()


def make_warc(pages, store):
    rng = random.Random(99)
    out = bytearray()
    info = b"software: fixture generator\r\nformat: WARC File Format 1.0\r\n"
    out += warc_record([("WARC-Type", "warcinfo"), ("WARC-Date", "2023-02-01T00:00:00Z"),
                        ("WARC-Record-ID", f"<urn:uuid:{uuid.UUID(int=rng.getrandbits(128))}>"),
                        ("Content-Type", "application/warc-fields")], info)
    for i, p in enumerate(pages):
        body = render(rng, p["site"], p).encode("utf-8")
        date = p["fetch_time"].strftime("%Y-%m-%dT%H:%M:%SZ")
        if i % 10 == 0:
            req = f"GET {p['url']} HTTP/1.1\r\nHost: {p['site']['domain']}\r\nUser-Agent: fixture\r\n\r\n".encode()
            out += warc_record([("WARC-Type", "request"), ("WARC-Target-URI", p["url"]), ("WARC-Date", date),
                                ("WARC-Record-ID", f"<urn:uuid:{uuid.UUID(int=rng.getrandbits(128))}>"),
                                ("Content-Type", "application/http; msgtype=request")], req)
        http_head = (f"HTTP/1.1 200 OK\r\nContent-Type: text/html; charset=UTF-8\r\nContent-Length: {len(body)}\r\n"
                     f"Server: nginx\r\n\r\n").encode()
        out += warc_record([("WARC-Type", "response"), ("WARC-Target-URI", p["url"]), ("WARC-Date", date),
                            ("WARC-Record-ID", f"<urn:uuid:{uuid.UUID(int=rng.getrandbits(128))}>"),
                            ("Content-Type", "application/http; msgtype=response")], http_head + body)
        if i == 5:
            # An image response: skipped as non-HTML.
            img_url = next(iter(sorted(store.index)))
            data = (DATA / "images" / store.index[img_url]).read_bytes()
            head = f"HTTP/1.1 200 OK\r\nContent-Type: image/jpeg\r\nContent-Length: {len(data)}\r\n\r\n".encode()
            out += warc_record([("WARC-Type", "response"), ("WARC-Target-URI", img_url), ("WARC-Date", date),
                                ("WARC-Record-ID", f"<urn:uuid:{uuid.UUID(int=rng.getrandbits(128))}>"),
                                ("Content-Type", "application/http; msgtype=response")], head + data)
    path = DATA / "fixtures" / "crawl.warc.gz"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(bytes(out))


# --------------------------------------------------------------- page dir

def make_page_dir(store):
    rng = random.Random(777)
    out = DATA / "pages"
    if out.exists():
        shutil.rmtree(out)
    out.mkdir(parents=True)
    when = datetime.datetime(2022, 11, 3, 9, 30, tzinfo=datetime.timezone.utc)
    rows = []
    for i in range(12):
        site = SITES[i % len(SITES)]
        when += datetime.timedelta(hours=7)
        p = make_page(rng, site, store, when)
        name = f"page{i + 1:02d}-{site['layout']}.html"
        (out / name).write_text(render(rng, site, p), encoding="utf-8")
        rows.append(f"{name}\t{p['url']}\t{when.strftime('%Y-%m-%dT%H:%M:%SZ')}")
    write_lines(out / "metadata.tsv", rows, header="file<TAB>url<TAB>fetch time")


def main():
    random.seed(0)
    write_lines(DATA / "wordlists" / "stop.txt", sorted(set(STOP_WORDS)), header="English stop words")
    write_lines(DATA / "wordlists" / "flagged.txt", sorted(set(FLAGGED_WORDS)), header="adult-content words")
    write_lines(DATA / "wordlists" / "spam.txt", sorted(set(SPAM_WORDS)),
                header="share/comment/cookie boilerplate vocabulary")
    make_corpus()
    make_quality()
    store = ImageStore(DATA / "images")
    for s in SITES:
        store.add(s["logo"], 240, 60, "png")
        store.add(s["widget_img"], 300, 250, "png")
    make_page_dir(store)
    pages = make_warc_pages(store)
    store.write_index()
    make_warc(pages, store)
    write_lines(DATA / "fixtures" / "optout.txt", ["https://img.castleguide.net/uploads/opted-out-tower.jpg"],
                header="image URLs whose creators opted out")
    config = {
        "input": "crawl.warc.gz",
        "input_format": "warc",
        "data_dir": "..",
        "shards": 4,
        "seed": 1234,
        "fetch": {"mode": "fixture", "fixture_dir": "../images"},
        "optout": {"mode": "local-list", "list": "optout.txt"},
    }
    (DATA / "fixtures" / "run_all.json").write_text(json.dumps(config, indent=2) + "\n")


if __name__ == "__main__":
    main()
