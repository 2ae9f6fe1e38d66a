// Copyright 2026 The lingctl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <array>

#include "lingctl/text.hpp"

namespace lingctl {
namespace {

// Closed classes, auxiliaries, adverbs and numerals all map to "other".
constexpr std::string_view kOther[] = {
    "a", "an", "the", "this", "that", "these", "those", "my", "your", "his", "her", "its", "our",
    "their", "some", "any", "no", "every", "each", "either", "neither", "all", "both", "few",
    "many", "much", "more", "most", "less", "least", "several", "such", "what", "which", "whose",
    "i", "me", "you", "he", "him", "she", "it", "we", "us", "they", "them", "myself", "yourself",
    "himself", "herself", "itself", "ourselves", "themselves", "mine", "yours", "hers", "ours",
    "theirs", "who", "whom", "someone", "anyone", "everyone", "nobody", "somebody", "anybody",
    "everybody", "something", "anything", "everything", "nothing", "one", "ones", "other",
    "others", "another", "in", "on", "at", "by", "for", "with", "about", "against", "between",
    "into", "through", "during", "before", "after", "above", "below", "to", "from", "up", "down",
    "of", "off", "over", "under", "again", "further", "then", "once", "within", "without",
    "toward", "towards", "upon", "across", "along", "among", "around", "behind", "beneath",
    "beside", "besides", "beyond", "despite", "except", "inside", "outside", "near", "onto",
    "per", "since", "than", "throughout", "till", "until", "unlike", "via", "versus", "amid",
    "and", "or", "but", "nor", "so", "yet", "because", "although", "though", "while", "whereas",
    "if", "unless", "whether", "as", "when", "where", "why", "how", "whenever", "wherever",
    "is", "am", "are", "was", "were", "be", "been", "being", "have", "has", "had", "having", "do",
    "does", "did", "doing", "will", "would", "shall", "should", "can", "could", "may", "might",
    "must", "ought", "not", "very", "too", "also", "just", "only", "even", "still", "already",
    "always", "never", "often", "sometimes", "usually", "rarely", "seldom", "ever", "here",
    "there", "now", "today", "tomorrow", "yesterday", "soon", "later", "well", "quite", "rather",
    "almost", "enough", "indeed", "instead", "however", "therefore", "thus", "hence", "moreover",
    "furthermore", "otherwise", "meanwhile", "perhaps", "maybe", "certainly", "probably",
    "quickly", "slowly", "easily", "really", "actually", "especially", "finally", "generally",
    "simply", "usually", "together", "away", "back", "forward", "ahead", "yes", "oh", "please",
    "etc", "e.g.", "i.e.", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    "eleven", "twelve", "twenty", "thirty", "forty", "fifty", "hundred", "thousand", "million",
    "billion", "first", "second", "third", "fourth", "fifth", "last", "don't", "doesn't",
    "didn't", "isn't", "aren't", "wasn't", "weren't", "can't", "couldn't", "won't", "wouldn't",
    "shouldn't", "haven't", "hasn't", "hadn't", "i'm", "you're", "we're", "they're", "it's",
    "he's", "she's", "that's", "there's", "what's", "let's", "i've", "you've", "we've",
    "they've", "i'll", "you'll", "we'll", "they'll", "i'd", "you'd", "we'd", "they'd", "cannot",
    "whatever", "whichever", "whoever", "else", "ago", "apart", "anyway", "overall", "far",
    "nearly", "fully", "directly", "exactly", "completely", "clearly", "highly", "mostly",
    "mainly", "largely", "relatively", "particularly", "typically", "effectively", "regularly",
    "recently", "currently", "immediately", "instantly", "gently", "carefully", "significantly",
};

constexpr std::string_view kNouns[] = {
    "time", "year", "people", "way", "day", "man", "woman", "child", "children", "world", "life",
    "hand", "part", "place", "case", "week", "company", "system", "program", "question", "work",
    "government", "number", "night", "point", "home", "water", "room", "mother", "father",
    "area", "money", "story", "fact", "month", "lot", "right", "study", "book", "eye", "job",
    "word", "business", "issue", "side", "kind", "head", "house", "service", "friend", "power",
    "hour", "game", "line", "end", "member", "law", "car", "city", "community", "name",
    "president", "team", "minute", "idea", "kid", "body", "information", "school", "face",
    "others", "level", "office", "door", "health", "person", "art", "war", "history", "party",
    "result", "change", "morning", "reason", "research", "girl", "guy", "moment", "air",
    "teacher", "force", "education", "foot", "feet", "boy", "age", "policy", "music", "market",
    "sense", "nation", "plan", "college", "interest", "death", "experience", "effect", "class",
    "control", "care", "field", "development", "role", "effort", "rate", "heart", "drug",
    "show", "leader", "light", "voice", "wife", "police", "mind", "price", "report", "decision",
    "son", "view", "relationship", "town", "road", "arm", "difference", "value", "building",
    "action", "model", "season", "society", "tax", "director", "position", "player", "record",
    "paper", "space", "ground", "form", "event", "official", "matter", "center", "couple",
    "site", "project", "activity", "star", "table", "need", "court", "oil", "situation", "cost",
    "industry", "figure", "street", "image", "phone", "data", "picture", "practice", "piece",
    "land", "product", "doctor", "wall", "patient", "worker", "news", "test", "movie", "north",
    "love", "support", "technology", "step", "baby", "computer", "type", "attention", "film",
    "tree", "source", "organization", "hair", "window", "evidence", "population", "site",
    "energy", "period", "course", "summer", "plant", "opportunity", "term", "letter",
    "condition", "choice", "rule", "daughter", "administration", "south", "husband", "floor",
    "campaign", "material", "population", "economy", "hospital", "church", "risk", "fire",
    "future", "defense", "security", "bank", "west", "sport", "board", "subject", "officer",
    "private", "rest", "behavior", "performance", "top", "goal", "second", "bed", "order",
    "author", "blood", "agency", "nature", "color", "store", "sound", "movement", "page",
    "race", "concern", "series", "language", "response", "animal", "factor", "decade",
    "article", "east", "artist", "scene", "stock", "career", "treatment", "approach", "size",
    "dog", "cat", "fox", "bird", "fish", "horse", "cow", "mouse", "lion", "tiger", "bear",
    "garden", "flower", "river", "mountain", "sea", "ocean", "lake", "forest", "island", "sky",
    "sun", "moon", "rain", "snow", "wind", "weather", "food", "meal", "bread", "apple", "fruit",
    "vegetable", "coffee", "tea", "milk", "sugar", "salt", "kitchen", "recipe", "dish",
    "restaurant", "hotel", "trip", "journey", "travel", "train", "bus", "plane", "ship",
    "bike", "bicycle", "engine", "machine", "tool", "device", "software", "hardware", "network",
    "internet", "website", "email", "message", "user", "customer", "client", "product", "price",
    "sale", "profit", "budget", "account", "strategy", "solution", "problem", "challenge",
    "benefit", "advantage", "feature", "function", "method", "process", "step", "task",
    "example", "list", "set", "group", "member", "article", "sentence", "paragraph", "essay",
    "text", "poem", "song", "novel", "character", "chapter", "title", "topic", "theme",
    "knowledge", "skill", "ability", "habit", "exercise", "sleep", "stress", "disease",
    "medicine", "vitamin", "diet", "brain", "skin", "bone", "muscle", "planet", "earth",
    "climate", "environment", "pollution", "resource", "species", "universe", "science",
    "scientist", "physics", "chemistry", "biology", "mathematics", "equation", "theory",
    "experiment", "algorithm", "code", "function", "variable", "database", "file", "key",
    "student", "lesson", "university", "degree", "exam", "homework", "library", "museum",
    "park", "beach", "village", "country", "state", "region", "border", "culture", "tradition",
    "holiday", "festival", "gift", "party", "wedding", "family", "parent", "brother", "sister",
    "neighbor", "stranger", "king", "queen", "hero", "leader", "citizen", "employee", "manager",
    "owner", "partner", "colleague", "audience", "crowd", "army", "soldier", "weapon", "peace",
    "freedom", "justice", "right", "duty", "truth", "belief", "faith", "hope", "fear", "anger",
    "joy", "happiness", "sadness", "emotion", "feeling", "thought", "memory", "dream",
    "goal", "purpose", "meaning", "detail", "aspect", "element", "component", "structure",
    "pattern", "trend", "rate", "amount", "quantity", "quality", "percentage", "percent",
    "dollar", "cent", "mile", "meter", "kilometer", "inch", "pound", "kilogram", "degree",
    "temperature", "speed", "distance", "weight", "height", "length", "width", "depth",
    "shape", "circle", "square", "triangle", "line", "corner", "edge", "surface", "box",
    "bag", "bottle", "cup", "glass", "plate", "chair", "desk", "bedroom", "bathroom", "roof",
    "window", "key", "lock", "clock", "watch", "camera", "screen", "keyboard", "button",
    "battery", "light", "lamp", "paint", "pen", "pencil", "card", "map", "photo", "video",
    "noun", "verb", "adjective", "vocabulary", "grammar", "translation", "answer", "instruction",
    "input", "output", "summary", "description", "explanation", "advice", "tip", "suggestion",
    "recommendation", "opinion", "argument", "discussion", "conversation", "interview",
    "meeting", "conference", "schedule", "deadline", "calendar", "minute", "second",
};

// Base forms plus irregular past forms. Regular inflections are handled by
// rules.
constexpr std::string_view kVerbs[] = {
    "say", "said", "get", "got", "gotten", "make", "made", "go", "went", "gone", "know", "knew",
    "known", "take", "took", "taken", "see", "saw", "seen", "come", "came", "think", "thought",
    "look", "want", "give", "gave", "given", "use", "find", "found", "tell", "told", "ask",
    "seem", "feel", "felt", "try", "leave", "left", "call", "keep", "kept", "let", "begin",
    "began", "begun", "help", "talk", "turn", "start", "show", "shown", "hear", "heard", "play",
    "run", "ran", "move", "live", "believe", "hold", "held", "bring", "brought", "happen",
    "write", "wrote", "written", "provide", "sit", "sat", "stand", "stood", "lose", "lost",
    "pay", "paid", "meet", "met", "include", "continue", "learn", "lead", "led", "understand",
    "understood", "watch", "follow", "stop", "create", "speak", "spoke", "spoken", "read",
    "allow", "add", "spend", "spent", "grow", "grew", "grown", "open", "walk", "win", "won",
    "offer", "remember", "consider", "appear", "buy", "bought", "wait", "serve", "die", "send",
    "sent", "expect", "build", "built", "stay", "fall", "fell", "fallen", "cut", "reach",
    "kill", "remain", "suggest", "raise", "pass", "sell", "sold", "require", "decide", "pull",
    "explain", "describe", "develop", "carry", "break", "broke", "broken", "receive", "agree",
    "support", "hit", "produce", "eat", "ate", "eaten", "cover", "catch", "caught", "draw",
    "drew", "drawn", "choose", "chose", "chosen", "cause", "point", "listen", "realize",
    "place", "close", "involve", "increase", "improve", "reduce", "prepare", "enjoy", "jump",
    "swim", "swam", "fly", "flew", "flown", "drive", "drove", "driven", "ride", "rode", "sing",
    "sang", "sung", "dance", "cook", "bake", "clean", "wash", "drink", "drank", "drunk",
    "sleep", "slept", "wake", "woke", "dream", "laugh", "cry", "smile", "shout", "whisper",
    "throw", "threw", "thrown", "push", "climb", "fix", "repair", "solve", "calculate",
    "measure", "compare", "contrast", "analyze", "evaluate", "identify", "define", "classify",
    "summarize", "translate", "rewrite", "generate", "design", "plan", "organize", "manage",
    "protect", "prevent", "avoid", "achieve", "apply", "ensure", "maintain", "determine",
    "discover", "explore", "examine", "imagine", "invent", "discuss", "argue", "claim",
    "answer", "respond", "reply", "contain", "depend", "represent", "affect", "encourage",
    "motivate", "inspire", "focus", "connect", "share", "teach", "taught", "study", "practice",
    "travel", "visit", "arrive", "return", "enter", "exit", "join", "attend", "hire", "fire",
    "save", "store", "collect", "gather", "combine", "mix", "separate", "divide", "multiply",
    "subtract", "count", "list", "select", "sort", "search", "check", "test", "verify",
    "become", "became", "feed", "fed", "forget", "forgot", "forgotten", "forgive", "hide",
    "hid", "hidden", "hurt", "lend", "lent", "lie", "lay", "lain", "light", "lit", "mean",
    "meant", "put", "quit", "rise", "rose", "risen", "seek", "sought", "set", "shake", "shook",
    "shoot", "shot", "shut", "sink", "sank", "steal", "stole", "stick", "stuck", "strike",
    "struck", "swing", "swung", "tear", "tore", "torn", "wear", "wore", "worn", "weep", "wept",
    "wind", "wound", "withdraw", "withdrew", "bite", "bit", "bitten", "blow", "blew", "blown",
    "bend", "bent", "bind", "bound", "bleed", "bled", "breed", "bred", "burn", "burnt",
    "dig", "dug", "fight", "fought", "flee", "fled", "freeze", "froze", "frozen", "hang",
    "hung", "kneel", "knelt", "lean", "leap", "leapt", "overcome", "overcame", "prove",
    "proven", "shine", "shone", "shrink", "shrank", "spin", "spun", "spread", "spring",
    "sprang", "sweep", "swept", "swear", "swore", "sworn", "thrive", "undergo", "underwent",
    "undertake", "undertook", "uphold", "upheld", "upset", "wake", "woken", "weave", "wove",
    "woven", "wring", "wrung", "compose", "complete", "deliver", "discover", "enhance",
    "establish", "exist", "express", "fill", "finish", "handle", "hate", "like", "love",
    "matter", "miss", "need", "notice", "obtain", "occur", "own", "pick", "prefer", "promise",
    "publish", "recognize", "recommend", "refer", "reflect", "relax", "rely", "remove",
    "replace", "report", "seek", "sign", "suffer", "suppose", "survive", "touch", "train",
    "treat", "wonder", "worry", "work",
};

constexpr std::string_view kAdjectives[] = {
    "good", "new", "old", "great", "high", "small", "large", "big", "long", "little", "young",
    "important", "bad", "different", "same", "able", "early", "late", "major", "public",
    "real", "best", "better", "sure", "free", "low", "full", "hard", "easy", "strong", "special",
    "clear", "recent", "certain", "personal", "open", "red", "blue", "green", "yellow",
    "black", "white", "brown", "gray", "grey", "pink", "purple", "orange", "difficult",
    "available", "likely", "short", "single", "medical", "current", "wrong", "private", "past",
    "foreign", "fine", "common", "poor", "natural", "significant", "similar", "hot", "cold",
    "warm", "cool", "dead", "central", "happy", "sad", "serious", "ready", "simple", "left",
    "physical", "general", "environmental", "financial", "blue", "democratic", "dark", "various",
    "entire", "close", "legal", "religious", "final", "main", "huge", "popular", "traditional",
    "cultural", "quick", "slow", "fast", "lazy", "bright", "beautiful", "pretty", "ugly",
    "nice", "kind", "friendly", "angry", "calm", "quiet", "loud", "rich", "cheap", "expensive",
    "healthy", "sick", "fresh", "clean", "dirty", "dry", "wet", "soft", "heavy", "light",
    "deep", "wide", "narrow", "thin", "thick", "tall", "smart", "clever", "wise", "brave",
    "proud", "shy", "honest", "polite", "rude", "gentle", "wild", "safe", "dangerous",
    "modern", "ancient", "perfect", "excellent", "amazing", "wonderful", "terrible",
    "awful", "strange", "familiar", "unique", "rare", "basic", "complex", "accurate",
    "correct", "true", "false", "possible", "impossible", "necessary", "useful", "helpful",
    "effective", "efficient", "positive", "negative", "social", "political", "economic",
    "global", "local", "national", "international", "human", "digital", "physical", "mental",
    "emotional", "creative", "scientific", "technical", "professional", "academic", "formal",
    "informal", "average", "total", "whole", "empty", "busy", "tired", "hungry", "thirsty",
    "sweet", "sour", "bitter", "spicy", "delicious", "tasty", "fun", "funny", "interesting",
    "boring", "exciting", "curious", "careful", "careless", "aware", "afraid", "alone",
    "alive", "asleep", "main", "key", "vital", "essential", "crucial", "relevant", "specific",
    "concise", "detailed", "brief", "short", "verbose", "overall", "primary", "secondary",
    "sustainable", "renewable", "solar", "electric", "mobile", "online", "virtual",
    "artificial", "intelligent", "automatic", "independent", "responsible", "successful",
    "powerful", "peaceful", "colorful", "meaningful", "harmful", "valuable", "reliable",
    "comfortable", "flexible", "visible", "productive", "active", "passive", "creative",
    "previous", "next", "former", "latter", "upper", "lower", "inner", "outer", "eager",
    "fair", "equal", "rapid", "steady", "stable", "urgent", "obvious", "famous", "nervous",
    "anxious", "jealous", "generous", "delightful", "grateful",
};

}  // namespace

LexiconTagger::LexiconTagger() {
  // Insertion order decides ties between lists: closed classes first, then
  // verbs (irregular forms are unambiguous), adjectives, nouns.
  for (auto w : kOther) lexicon_.try_emplace(std::string(w), Pos::kOther);
  for (auto w : kVerbs) lexicon_.try_emplace(std::string(w), Pos::kVerb);
  for (auto w : kAdjectives) lexicon_.try_emplace(std::string(w), Pos::kAdjective);
  for (auto w : kNouns) lexicon_.try_emplace(std::string(w), Pos::kNoun);
  // A few words whose dominant reading differs from the list order above.
  lexicon_["work"] = Pos::kNoun;
  lexicon_["study"] = Pos::kNoun;
  lexicon_["answer"] = Pos::kNoun;
  lexicon_["plan"] = Pos::kNoun;
  lexicon_["dream"] = Pos::kNoun;
  lexicon_["test"] = Pos::kNoun;
  lexicon_["list"] = Pos::kNoun;
  lexicon_["practice"] = Pos::kNoun;
  lexicon_["report"] = Pos::kNoun;
  lexicon_["support"] = Pos::kNoun;
  lexicon_["light"] = Pos::kNoun;
  lexicon_["place"] = Pos::kNoun;
  lexicon_["point"] = Pos::kNoun;
  lexicon_["key"] = Pos::kAdjective;
}

std::shared_ptr<const LexiconTagger> LexiconTagger::shared() {
  static const auto instance = std::make_shared<const LexiconTagger>();
  return instance;
}

const Pos* LexiconTagger::lookup(std::string_view folded) const {
  auto it = lexicon_.find(std::string(folded));
  return it == lexicon_.end() ? nullptr : &it->second;
}

namespace {

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() > suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

bool is_consonant(char c) {
  return c >= 'a' && c <= 'z' && c != 'a' && c != 'e' && c != 'i' && c != 'o' && c != 'u';
}

}  // namespace

Pos LexiconTagger::by_inflection(std::string_view w) const {
  auto find_open = [this](std::string_view stem) -> const Pos* {
    const Pos* p = lookup(stem);
    return (p != nullptr && *p != Pos::kOther) ? p : nullptr;
  };
  auto undouble = [](std::string_view stem) -> std::string_view {
    if (stem.size() >= 3 && stem[stem.size() - 1] == stem[stem.size() - 2] && is_consonant(stem.back())) {
      return stem.substr(0, stem.size() - 1);
    }
    return {};
  };

  // Plurals and third person singular keep the stem's tag.
  if (ends_with(w, "ies")) {
    std::string stem = std::string(w.substr(0, w.size() - 3)) + "y";
    if (const Pos* p = find_open(stem); p && *p != Pos::kAdjective) return *p;
  }
  if (ends_with(w, "es")) {
    if (const Pos* p = find_open(w.substr(0, w.size() - 2)); p && *p != Pos::kAdjective) return *p;
  }
  if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is")) {
    if (const Pos* p = find_open(w.substr(0, w.size() - 1)); p && *p != Pos::kAdjective) return *p;
  }
  // Participles and past tense.
  if (ends_with(w, "ing") && w.size() > 4) {
    std::string_view stem = w.substr(0, w.size() - 3);
    if (find_open(stem) || find_open(std::string(stem) + "e") || find_open(undouble(stem))) return Pos::kVerb;
  }
  if (ends_with(w, "ed") && w.size() > 3) {
    std::string_view stem = w.substr(0, w.size() - 2);
    if (find_open(stem) || find_open(w.substr(0, w.size() - 1)) || find_open(undouble(stem))) return Pos::kVerb;
    if (ends_with(w, "ied") && find_open(std::string(w.substr(0, w.size() - 3)) + "y")) return Pos::kVerb;
  }
  // Comparatives and superlatives.
  for (std::string_view suffix : {std::string_view("er"), std::string_view("est")}) {
    if (!ends_with(w, suffix)) continue;
    std::string_view stem = w.substr(0, w.size() - suffix.size());
    auto adj = [&](std::string_view s) {
      const Pos* p = lookup(s);
      return p != nullptr && *p == Pos::kAdjective;
    };
    if (adj(stem) || adj(std::string(stem) + "e") || adj(undouble(stem))) return Pos::kAdjective;
    if (!stem.empty() && stem.back() == 'i' && adj(std::string(stem.substr(0, stem.size() - 1)) + "y")) {
      return Pos::kAdjective;
    }
  }

  struct SuffixRule {
    std::string_view suffix;
    Pos pos;
  };
  // Longer suffixes first so "-ical" wins over "-al".
  static constexpr SuffixRule kRules[] = {
      {"ically", Pos::kOther},
      {"tion", Pos::kNoun},    {"sion", Pos::kNoun},    {"ment", Pos::kNoun},  {"ness", Pos::kNoun},
      {"ship", Pos::kNoun},    {"hood", Pos::kNoun},    {"ance", Pos::kNoun},  {"ence", Pos::kNoun},
      {"ical", Pos::kAdjective}, {"ious", Pos::kAdjective}, {"able", Pos::kAdjective},
      {"ible", Pos::kAdjective}, {"less", Pos::kAdjective}, {"ful", Pos::kAdjective},
      {"ous", Pos::kAdjective}, {"ive", Pos::kAdjective}, {"ish", Pos::kAdjective},
      {"ary", Pos::kAdjective}, {"ize", Pos::kVerb},   {"ise", Pos::kVerb},     {"ify", Pos::kVerb},
      {"ity", Pos::kNoun},     {"ism", Pos::kNoun},     {"ist", Pos::kNoun},   {"dom", Pos::kNoun},
      {"ure", Pos::kNoun},     {"ing", Pos::kVerb},     {"ed", Pos::kVerb},    {"ly", Pos::kOther},
      {"al", Pos::kAdjective}, {"ic", Pos::kAdjective}, {"er", Pos::kNoun},    {"or", Pos::kNoun},
  };
  for (const auto& rule : kRules) {
    if (ends_with(w, rule.suffix) && w.size() >= rule.suffix.size() + 2) return rule.pos;
  }
  return Pos::kNoun;
}

Pos LexiconTagger::tag_word(std::string_view w) const {
  if (const Pos* p = lookup(w)) return *p;

  bool has_letter = false;
  for (char c : w) {
    if ((c >= 'a' && c <= 'z') || static_cast<unsigned char>(c) >= 0x80) has_letter = true;
  }
  if (!has_letter) return Pos::kOther;

  // Possessives and contractions: tag the part before the apostrophe.
  for (std::string_view apostrophe : {std::string_view("'"), std::string_view("\xE2\x80\x99")}) {
    auto at = w.find(apostrophe);
    if (at != std::string_view::npos && at > 0) {
      std::string_view rest = w.substr(at + apostrophe.size());
      if (rest == "s") return tag_word(w.substr(0, at));
      return Pos::kOther;
    }
  }
  // Hyphenated compounds take the tag of their last part.
  if (auto dash = w.rfind('-'); dash != std::string_view::npos && dash + 1 < w.size()) {
    return tag_word(w.substr(dash + 1));
  }
  // Trailing abbreviation dot.
  if (w.back() == '.') return Pos::kOther;
  return by_inflection(w);
}

}  // namespace lingctl
