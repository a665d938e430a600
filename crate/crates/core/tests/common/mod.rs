#![allow(dead_code)]

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqtag::corpus::{ColumnSpec, Corpus, Sentence};

const FIRST: &[&str] = &[
    "Jean",
    "Pierre",
    "Louis",
    "Henri",
    "Paul",
    "Jacques",
    "Marcel",
    "Émile",
    "Albert",
    "Georges",
    "Lucien",
    "Auguste",
    "Charles",
    "Édouard",
    "Eugène",
    "Félix",
    "Gaston",
    "Hippolyte",
    "Jules",
    "Léon",
    "Marie",
    "Jeanne",
    "Louise",
    "Marguerite",
    "Berthe",
    "Camille",
    "Adèle",
    "Hortense",
    "Joséphine",
    "Madeleine",
];
const LAST: &[&str] = &[
    "Brandi",
    "Dupont",
    "Durand",
    "Lefèvre",
    "Moreau",
    "Girard",
    "Bonnet",
    "Mercier",
    "Lambert",
    "Fontaine",
    "Rousseau",
    "Vincent",
    "Blanchard",
    "Garnier",
    "Chevalier",
    "Faure",
    "Gauthier",
    "Perrin",
    "Robin",
    "Clément",
    "Morin",
    "Nicolas",
    "Henry",
    "Roussel",
    "Mathieu",
    "Gautier",
    "Masson",
    "Marchand",
    "Duval",
    "Denis",
    "Dumont",
    "Marie",
    "Lemaire",
    "Noël",
    "Meyer",
    "Dufour",
    "Meunier",
    "Brun",
    "Blanc",
    "Giraud",
];
const TITLES: &[&str] = &["M.", "Mme", "Mlle", "MM.", "Dr", "général", "abbé", "docteur", "maître", "colonel"];
const CITIES: &[&str] = &[
    "Paris",
    "Lyon",
    "Marseille",
    "Bordeaux",
    "Rennes",
    "Brest",
    "Nantes",
    "Lille",
    "Rouen",
    "Reims",
    "Dijon",
    "Grenoble",
    "Toulouse",
    "Nancy",
    "Metz",
    "Amiens",
    "Caen",
    "Limoges",
    "Tours",
    "Angers",
    "Orléans",
    "Versailles",
    "Chartres",
    "Quimper",
    "Vannes",
    "Lorient",
    "Morlaix",
    "Dinan",
    "Lannion",
    "Guingamp",
    "Saint-Brieuc",
    "Saint-Malo",
    "Saint-Étienne",
    "Clermont-Ferrand",
    "Aix",
    "Nice",
    "Toulon",
    "Nîmes",
    "Avignon",
    "Besançon",
    "Alger",
    "Oran",
    "Londres",
    "Berlin",
    "Vienne",
    "Rome",
    "Madrid",
    "Bruxelles",
    "Genève",
    "Anvers",
];
const ORG_HEADS: &[&str] = &[
    "lycée",
    "collège",
    "Banque",
    "Compagnie",
    "Société",
    "Chambre",
    "Conseil",
    "Académie",
    "Cercle",
    "Comité",
    "Union",
    "Caisse",
    "Syndicat",
    "Association",
    "Ligue",
];
const ORG_TAILS: &[&str] = &[
    "Molière",
    "Condorcet",
    "Hoche",
    "Carnot",
    "Voltaire",
    "Descartes",
    "Pasteur",
    "Colbert",
    "Turgot",
    "Lavoisier",
    "Monge",
    "Fénelon",
    "Buffon",
    "Racine",
    "Corneille",
    "Richelieu",
    "Mazarin",
    "Sully",
    "Vauban",
    "Duguay-Trouin",
];
const ORG_MIDDLE: &[&str] = &["de", "du", "des"];
const VERBS: &[&str] = &[
    "a",
    "est",
    "était",
    "sera",
    "arrive",
    "part",
    "revient",
    "quitte",
    "visite",
    "préside",
    "dirige",
    "annonce",
    "reçoit",
    "inaugure",
    "représente",
    "accompagne",
    "rejoint",
    "remplace",
    "nomme",
    "salue",
];
const FILLER: &[&str] = &[
    "le",
    "la",
    "les",
    "un",
    "une",
    "hier",
    "demain",
    "ce",
    "matin",
    "soir",
    "avec",
    "pour",
    "dans",
    "sur",
    "par",
    "vers",
    "depuis",
    "chez",
    "après",
    "avant",
    "séance",
    "réunion",
    "banquet",
    "discours",
    "voyage",
    "conférence",
    "fête",
    "cérémonie",
    "assemblée",
    "élection",
    "concert",
    "exposition",
    "grande",
    "nouvelle",
    "ancienne",
    "solennelle",
    "publique",
    "générale",
    "annuelle",
    "très",
    "enfin",
    "aussi",
    "encore",
    "bientôt",
    "toujours",
    "déjà",
    "ainsi",
    "donc",
    "lundi",
    "mardi",
    "mercredi",
    "jeudi",
    "vendredi",
    "samedi",
    "dimanche",
    "janvier",
    "février",
    "mars",
    "avril",
    "mai",
    "juin",
    "juillet",
    "août",
    "septembre",
    "octobre",
    "novembre",
    "décembre",
    "1890",
    "1895",
    "1900",
    "1905",
    "1910",
    "1914",
    "président",
    "ministre",
    "maire",
    "préfet",
    "député",
    "professeur",
    "directeur",
    "secrétaire",
    "trésorier",
    "membre",
];
const PUNCT: &[&str] = &[",", ";", ":"];

fn person(rng: &mut ChaCha8Rng, out: &mut Vec<(String, String)>) {
    if rng.random_bool(0.4) {
        out.push((TITLES.choose(rng).unwrap().to_string(), "O".into()));
    }
    let full = rng.random_bool(0.6);
    let first = FIRST.choose(rng).unwrap();
    let last = LAST.choose(rng).unwrap();
    if full {
        out.push((first.to_string(), "B-PER".into()));
        out.push((last.to_string(), "I-PER".into()));
    } else {
        out.push((last.to_string(), "B-PER".into()));
    }
}

fn place(rng: &mut ChaCha8Rng, out: &mut Vec<(String, String)>) {
    out.push((["à", "de", "vers", "depuis"].choose(rng).unwrap().to_string(), "O".into()));
    out.push((CITIES.choose(rng).unwrap().to_string(), "B-LOC".into()));
}

fn organization(rng: &mut ChaCha8Rng, out: &mut Vec<(String, String)>) {
    out.push((["le", "la", "au", "du"].choose(rng).unwrap().to_string(), "O".into()));
    out.push((ORG_HEADS.choose(rng).unwrap().to_string(), "B-ORG".into()));
    if rng.random_bool(0.5) {
        out.push((ORG_MIDDLE.choose(rng).unwrap().to_string(), "I-ORG".into()));
    }
    out.push((ORG_TAILS.choose(rng).unwrap().to_string(), "I-ORG".into()));
}

fn filler(rng: &mut ChaCha8Rng, out: &mut Vec<(String, String)>, n: usize) {
    for _ in 0..n {
        out.push((FILLER.choose(rng).unwrap().to_string(), "O".into()));
    }
}

/// Sentences from a small newspaper-style grammar over PER, LOC and ORG,
/// tagged in BIO.
pub fn synthetic_corpus(sentences: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(sentences);
    for _ in 0..sentences {
        let mut rows: Vec<(String, String)> = Vec::new();
        let n = rng.random_range(0..3);
        filler(&mut rng, &mut rows, n);
        match rng.random_range(0..4) {
            0 => {
                person(&mut rng, &mut rows);
                rows.push((VERBS.choose(&mut rng).unwrap().to_string(), "O".into()));
                place(&mut rng, &mut rows);
            }
            1 => {
                organization(&mut rng, &mut rows);
                rows.push((VERBS.choose(&mut rng).unwrap().to_string(), "O".into()));
                person(&mut rng, &mut rows);
            }
            2 => {
                person(&mut rng, &mut rows);
                rows.push((PUNCT.choose(&mut rng).unwrap().to_string(), "O".into()));
                filler(&mut rng, &mut rows, 1);
                organization(&mut rng, &mut rows);
                place(&mut rng, &mut rows);
            }
            _ => {
                filler(&mut rng, &mut rows, 2);
                place(&mut rng, &mut rows);
                rows.push((VERBS.choose(&mut rng).unwrap().to_string(), "O".into()));
                organization(&mut rng, &mut rows);
            }
        }
        let n = rng.random_range(0..3);
        filler(&mut rng, &mut rows, n);
        rows.push((".".into(), "O".into()));
        out.push(Sentence::from_pairs(&rows).unwrap());
    }
    Corpus::new(out, ColumnSpec::default())
}

/// The worked example sentence, tagged in each scheme.
pub const FIG_TOKENS: [&str; 8] = ["M.", "Brandi", ",", "Professeur", "au", "lycée", "de", "Saint-Brieuc"];
pub const FIG_IO: [&str; 8] = ["O", "I-PER", "O", "O", "O", "I-ORG", "I-ORG", "I-ORG"];
pub const FIG_BIO: [&str; 8] = ["O", "B-PER", "O", "O", "O", "B-ORG", "I-ORG", "I-ORG"];
pub const FIG_BIOES: [&str; 8] = ["O", "S-PER", "O", "O", "O", "B-ORG", "I-ORG", "E-ORG"];

pub fn column_file(tags: &[&str]) -> String {
    FIG_TOKENS.iter().zip(tags).map(|(w, t)| format!("{w} {t}\n")).collect()
}
