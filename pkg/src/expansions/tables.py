"""
Coefficient Tables

Exact rational Chebyshev coefficients for the tabulated n0 classes, the
truncation orders that reach a target matrix relative error, and the Pade
coefficients for orders 0..9.
"""

from fractions import Fraction
from typing import Dict, Optional, Tuple

N0_CLASSES: Tuple[float, ...] = (1e-1, 5e-2, 1e-2, 5e-3, 1e-3)
DELTAS: Tuple[float, ...] = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)


def _fractions(*values: str) -> Tuple[Fraction, ...]:
    return tuple(Fraction(value) for value in values)


# Chebyshev coefficients of sqrt(x) on [n0, 1], c_0..c_19, raw c_0 (not halved).
CHEBYSHEV_SQRT: Dict[float, Tuple[Fraction, ...]] = {
    1e-1: _fractions(
        "50720584/36057897", "58192354/176379781", "-4460738/108096729", "599673/57061255",
        "-287819/85384633", "183411/150871267", "-58340/123912171", "51981/271721903",
        "-7566/94035965", "2764/79582277", "-201/13137223", "1188/173409911",
        "-409/131560083", "145/101639721", "-17/25723455", "55/178196989",
        "-15/103329721", "3/43668719", "-1/30591204", "1/63979016",
    ),
    5e-2: _fractions(
        "141760564/104989387", "35002745/95238932", "-5385084/98048633", "375119/22232916",
        "-123075/18770531", "964144/335715223", "-99240/73358167", "61845/92416364",
        "-49497/144355439", "43265/239826181", "-8116/83759003", "4645/87782356",
        "-4539/154958201", "2159/131648930", "-567/61162961", "708/133999337",
        "-225/74184637", "187/106738132", "-91/89427045", "77/129639190",
    ),
    1e-2: _fractions(
        "94293998/72892523", "11654085/28548136", "-13024699/174927782", "1616566/56730601",
        "-1147126/82276417", "761833/98466580", "-308484/66539819", "263708/90144229",
        "-162889/85022700", "161374/125071371", "-37949/42730513", "43604/70096297",
        "-29207/66081562", "51537/162168061", "-25435/110193549", "11535/68213866",
        "-10239/82034690", "3604/38866185", "-6215/89696092", "2753/52900755",
    ),
    5e-3: _fractions(
        "111282682/86634283", "19778972/47632141", "-10097893/128419878", "1613988/51323195",
        "-1103585/68372228", "1156783/122811139", "-1072665/180416284", "182246/46057955",
        "-335564/122664125", "102602/52715219", "-86227/60890409", "77118/73520351",
        "-61735/78300108", "43125/71884333", "-93187/202045214", "27405/76607114",
        "-26887/96161515", "1853/8422610", "-19053/109416983", "2101/15164315",
    ),
    1e-3: _fractions(
        "67448647/52859297", "18465778/43750239", "-3199979/38492102", "3836927/109928911",
        "-1863218/98477081", "1438469/122838561", "-1071366/136237541", "1846182/330775465",
        "-1551939/376426982", "400555/127615892", "-362239/148056512", "272353/140130127",
        "-353347/225334648", "98124/76560973", "-75049/70863879", "78769/89167398",
        "-41954/56475965", "258049/410152123", "-33661/62777131", "177773/386862333",
    ),
}

# Chebyshev coefficients of 1/sqrt(x) on [n0, 1], c_0..c_19, raw c_0 (not halved).
CHEBYSHEV_INVSQRT: Dict[float, Tuple[Fraction, ...]] = {
    1e-1: _fractions(
        "374048017/113951175", "-88499941/99875048", "15797788/45155977", "-20535446/134671187",
        "3198561/45955201", "-1821274/55810317", "1646349/105728006", "-656367/87247730",
        "187127/51011883", "-257569/142972536", "337750/379582213", "-17881/40498318",
        "23207/105516984", "-16946/154174661", "5735/104114243", "-1684/60855691",
        "1403/100712358", "-640/91088439", "138/38877931", "-197/109695708",
    ),
    5e-2: _fractions(
        "249779459/67453088", "-350792999/280590374", "132037463/217146298", "-17309909/53231083",
        "24420789/134319148", "-11726340/112404257", "9883564/162320651", "-3377515/93897642",
        "1014741/47325860", "-16780163/1303748560", "510107/65658935", "-491723/104378654",
        "360646/125772587", "-240771/137509316", "128666/120011707", "-79363/120608489",
        "30997/76590848", "-26019/104339573", "15878/103168691", "-17123/180008350",
    ),
    1e-2: _fractions(
        "237825977/50542861", "-39264271/17952244", "195265677/138817343", "-103416965/105120298",
        "12141478/16961213", "-81979913/153769588", "100102199/248249039", "-41303408/133947555",
        "47672400/200509969", "-10291450/55779169", "11305153/78552187", "-9467215/83975554",
        "3834427/43265789", "-7690733/110058353", "5948375/107682632", "-3503490/80051251",
        "1048651/30183225", "-6557825/237360333", "19174519/871395101", "-999069/56928095",
    ),
    5e-3: _fractions(
        "564146905/109693414", "-271445188/103894561", "203729517/112913626", "-84437949/62627027",
        "49111051/46961990", "-15609456/18825521", "63222034/94771407", "-56599573/104360532",
        "38412599/86436742", "-62114496/169532831", "75488883/248678426", "-2511703/9946203",
        "16184137/76778415", "-21196048/120119399", "17846601/120516115", "-7550133/60623138",
        "11163511/106379007", "-5209630/58817269", "7231330/96584953", "-11584499/182801188",
    ),
    1e-3: _fractions(
        "630048624/102215551", "-343367843/94808470", "294957839/105949003", "-494742647/216022718",
        "1224960907/629659811", "-206423487/122566312", "180757935/122418742", "-130317757/99758659",
        "119757642/102912463", "-36868111/35375072", "65195223/69543947", "-95599410/112964291",
        "184341026/240571663", "-55931467/80408470", "68082220/107582399", "-70019489/121380714",
        "69973473/132846113", "-35406207/73506184", "53675438/121692277", "-34220975/84624381",
    ),
}

# Chebyshev truncation order per (n0 class, delta); None where no tabulated
# order reaches delta.
CHEBYSHEV_ORDER_SQRT: Dict[float, Tuple[Optional[int], ...]] = {
    1e-1: (3, 5, 8, 11, 14),
    5e-2: (4, 7, 11, 15, 19),
    1e-2: (6, 13, 21, 31, 40),
    5e-3: (8, 17, 29, 41, None),
    1e-3: (12, 30, None, None, None),
}

CHEBYSHEV_ORDER_INVSQRT: Dict[float, Tuple[Optional[int], ...]] = {
    1e-1: (5, 9, 12, 15, 19),
    5e-2: (8, 13, 17, 22, 27),
    1e-2: (18, 28, 39, None, None),
    5e-3: (25, 40, None, None, None),
    1e-3: (None, None, None, None, None),
}

# Pade coefficients c_0..c_N for N = 0..9.
PADE: Tuple[Tuple[int, ...], ...] = (
    (1,),
    (1, 3),
    (1, 10, 5),
    (1, 21, 35, 7),
    (1, 36, 126, 84, 9),
    (1, 55, 330, 462, 165, 11),
    (1, 78, 715, 1716, 1287, 286, 13),
    (1, 105, 1365, 5005, 6435, 3003, 455, 15),
    (1, 136, 2380, 12376, 24310, 19448, 6188, 680, 17),
    (1, 171, 3876, 27132, 75582, 92378, 50388, 11628, 969, 19),
)
