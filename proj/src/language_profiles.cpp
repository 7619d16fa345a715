// Training text for the built-in character n-gram language profiles.

#include "language_profiles.hpp"

namespace mmweb::detail {

const std::vector<std::pair<std::string_view, std::string_view>>& builtin_language_profiles() {
    static const std::vector<std::pair<std::string_view, std::string_view>> profiles = {
        {"en", R"(The river rises in the northern hills and flows south through a wide valley before it reaches the sea.
For most of its length the water is slow and shallow, and in the summer months children swim near the old stone bridge.
The town was founded in the twelfth century by a group of farmers who built their houses on the higher ground to avoid the floods.
Over the following years a market grew up around the church, and merchants came from the coast to trade wool, salt and grain.
Today the population is a little over twenty thousand people, and most of them work in the nearby factories or in the hospital.
The museum on the main square has a small collection of paintings, several maps of the region and a number of tools that were used by the first settlers.
Visitors who arrive by train can walk to the centre in about ten minutes, although there is also a bus that runs every half hour.
In the spring the meadows along the river are full of wild flowers, and many birds stop here during their long journey to the north.
Scientists have studied these birds for decades and have found that the timing of their arrival has changed as the climate has become warmer.
The school was rebuilt after a fire destroyed the original building, and it now has a library, a theatre and a large playing field.
Local writers have described the landscape in their novels, and one of the most famous books about the area was published shortly after the war.
It tells the story of a young woman who leaves her family farm to study in the city and who returns many years later to find that everything has changed.
The recipe for the traditional bread of the region is simple: flour, water, salt and a little yeast, baked slowly in a hot oven.
People often say that the weather here is unpredictable, because a sunny morning can turn into a cold and windy afternoon without any warning.
When you plan a trip, it is a good idea to bring a warm jacket and comfortable shoes, since the paths in the forest can be wet and muddy.
What happens next depends on the decisions that the council makes this year about new roads, housing and the protection of the countryside.)"},
        {"fr", R"(La rivière prend sa source dans les collines du nord et coule vers le sud à travers une large vallée avant de rejoindre la mer.
Sur la plus grande partie de son cours, l'eau est lente et peu profonde, et pendant l'été les enfants se baignent près du vieux pont de pierre.
La ville a été fondée au douzième siècle par un groupe de paysans qui ont construit leurs maisons sur les hauteurs pour éviter les inondations.
Au cours des années suivantes, un marché s'est développé autour de l'église, et des marchands venaient de la côte pour échanger de la laine, du sel et des céréales.
Aujourd'hui, la population compte un peu plus de vingt mille habitants, et la plupart d'entre eux travaillent dans les usines voisines ou à l'hôpital.
Le musée de la place principale possède une petite collection de tableaux, plusieurs cartes de la région et des outils utilisés par les premiers habitants.
Les visiteurs qui arrivent en train peuvent rejoindre le centre à pied en dix minutes environ, mais il existe aussi un autobus toutes les demi-heures.
Au printemps, les prairies le long de la rivière sont couvertes de fleurs sauvages, et de nombreux oiseaux s'y arrêtent pendant leur long voyage vers le nord.
Les chercheurs étudient ces oiseaux depuis des décennies et ont constaté que la date de leur arrivée a changé à mesure que le climat se réchauffait.
L'école a été reconstruite après qu'un incendie a détruit le bâtiment d'origine, et elle dispose maintenant d'une bibliothèque, d'un théâtre et d'un grand terrain de sport.
Des écrivains de la région ont décrit ce paysage dans leurs romans, et l'un des livres les plus célèbres sur cette région a été publié peu après la guerre.
Il raconte l'histoire d'une jeune femme qui quitte la ferme familiale pour étudier en ville et qui revient bien des années plus tard pour découvrir que tout a changé.
La recette du pain traditionnel est simple : de la farine, de l'eau, du sel et un peu de levure, cuits lentement dans un four très chaud.
On dit souvent que le temps est imprévisible ici, car une matinée ensoleillée peut se transformer en un après-midi froid et venteux sans prévenir.
Quand vous préparez un voyage, il vaut mieux emporter une veste chaude et des chaussures confortables, car les chemins de la forêt sont souvent humides.
La suite dépendra des décisions que le conseil municipal prendra cette année au sujet des routes, du logement et de la protection de la campagne.)"},
        {"de", R"(Der Fluss entspringt in den nördlichen Hügeln und fließt durch ein breites Tal nach Süden, bevor er das Meer erreicht.
Auf dem größten Teil seines Laufs ist das Wasser langsam und flach, und im Sommer baden die Kinder in der Nähe der alten Steinbrücke.
Die Stadt wurde im zwölften Jahrhundert von einer Gruppe von Bauern gegründet, die ihre Häuser auf den höher gelegenen Flächen bauten, um den Überschwemmungen zu entgehen.
In den folgenden Jahren entstand rund um die Kirche ein Markt, und Händler kamen von der Küste, um Wolle, Salz und Getreide zu verkaufen.
Heute hat die Stadt etwas mehr als zwanzigtausend Einwohner, und die meisten von ihnen arbeiten in den nahen Fabriken oder im Krankenhaus.
Das Museum am Marktplatz besitzt eine kleine Sammlung von Gemälden, mehrere Karten der Gegend und einige Werkzeuge, die von den ersten Siedlern benutzt wurden.
Besucher, die mit dem Zug ankommen, können in etwa zehn Minuten zu Fuß in die Innenstadt gehen, es gibt aber auch einen Bus, der jede halbe Stunde fährt.
Im Frühling sind die Wiesen entlang des Flusses voller wilder Blumen, und viele Vögel machen hier auf ihrer langen Reise nach Norden eine Pause.
Wissenschaftler beobachten diese Vögel seit Jahrzehnten und haben festgestellt, dass sich der Zeitpunkt ihrer Ankunft mit dem wärmeren Klima verändert hat.
Die Schule wurde nach einem Brand, der das ursprüngliche Gebäude zerstörte, neu gebaut und hat jetzt eine Bibliothek, ein Theater und einen großen Sportplatz.
Schriftsteller aus der Region haben die Landschaft in ihren Romanen beschrieben, und eines der bekanntesten Bücher über die Gegend erschien kurz nach dem Krieg.
Es erzählt die Geschichte einer jungen Frau, die den Hof ihrer Familie verlässt, um in der Stadt zu studieren, und viele Jahre später zurückkehrt, als sich alles verändert hat.
Das Rezept für das traditionelle Brot ist einfach: Mehl, Wasser, Salz und ein wenig Hefe, langsam in einem heißen Ofen gebacken.
Man sagt oft, dass das Wetter hier unberechenbar ist, weil sich ein sonniger Morgen ohne Warnung in einen kalten und windigen Nachmittag verwandeln kann.
Wer eine Reise plant, sollte eine warme Jacke und bequeme Schuhe mitnehmen, denn die Wege im Wald sind oft nass und schlammig.
Wie es weitergeht, hängt von den Entscheidungen ab, die der Stadtrat in diesem Jahr über neue Straßen, Wohnungen und den Schutz der Landschaft trifft.)"},
        {"es", R"(El río nace en las colinas del norte y fluye hacia el sur a través de un amplio valle antes de llegar al mar.
En la mayor parte de su recorrido el agua es lenta y poco profunda, y durante el verano los niños se bañan cerca del viejo puente de piedra.
La ciudad fue fundada en el siglo doce por un grupo de campesinos que construyeron sus casas en las zonas altas para evitar las inundaciones.
En los años siguientes creció un mercado alrededor de la iglesia, y los comerciantes llegaban desde la costa para vender lana, sal y cereales.
Hoy la población es de poco más de veinte mil habitantes, y la mayoría de ellos trabaja en las fábricas cercanas o en el hospital.
El museo de la plaza principal tiene una pequeña colección de pinturas, varios mapas de la región y algunas herramientas que usaron los primeros pobladores.
Los visitantes que llegan en tren pueden caminar hasta el centro en unos diez minutos, aunque también hay un autobús que pasa cada media hora.
En primavera los prados junto al río se llenan de flores silvestres, y muchas aves se detienen aquí durante su largo viaje hacia el norte.
Los científicos estudian estas aves desde hace décadas y han descubierto que la fecha de su llegada ha cambiado a medida que el clima se ha vuelto más cálido.
La escuela fue reconstruida después de que un incendio destruyera el edificio original, y ahora tiene una biblioteca, un teatro y un gran campo de deportes.
Los escritores de la zona han descrito el paisaje en sus novelas, y uno de los libros más famosos sobre la región se publicó poco después de la guerra.
Cuenta la historia de una joven que deja la granja de su familia para estudiar en la ciudad y que regresa muchos años después para descubrir que todo ha cambiado.
La receta del pan tradicional es sencilla: harina, agua, sal y un poco de levadura, horneados lentamente en un horno muy caliente.
La gente suele decir que el tiempo aquí es imprevisible, porque una mañana soleada puede convertirse en una tarde fría y ventosa sin ningún aviso.
Cuando planifique un viaje, conviene llevar una chaqueta de abrigo y zapatos cómodos, ya que los caminos del bosque suelen estar mojados.
Lo que ocurra después dependerá de las decisiones que el ayuntamiento tome este año sobre las carreteras, la vivienda y la protección del campo.)"},
    };
    return profiles;
}

}  // namespace mmweb::detail
