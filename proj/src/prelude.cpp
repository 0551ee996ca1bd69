#include "fleng/prelude.hpp"

namespace fleng {

// Every operation carries a signature so functional patterns built from it
// can be typed.  Lists are built in; numerals elaborate to Nat.
const char* preludeSource() {
  return R"PRE(
data Bool = True | False

data Success = Success

data Nat = Z | S Nat

data Maybe a = Nothing | Just a

data Pair a b = Pair a b

(&) :: Success -> Success -> Success
Success & c = c

not :: Bool -> Bool
not True = False
not False = True

and :: Bool -> Bool -> Bool
and True x = x
and False x = False

or :: Bool -> Bool -> Bool
or True x = True
or False x = x

xor :: Bool -> Bool -> Bool
xor True x = not x
xor False x = x

xorSelf :: Bool -> Bool
xorSelf x = xor x x

aBool :: Bool
aBool = b where b :: Bool free

aBoolList :: [Bool]
aBoolList = bs where bs :: [Bool] free

id :: a -> a
id x = x

ite :: Bool -> a -> a -> a
ite True t e = t
ite False t e = e

otherwise :: Bool
otherwise = True

fst :: Pair a b -> a
fst (Pair x y) = x

snd :: Pair a b -> b
snd (Pair x y) = y

head :: [a] -> a
head (x:xs) = x

tail :: [a] -> [a]
tail (x:xs) = xs

null :: [a] -> Bool
null [] = True
null (x:xs) = False

(++) :: [a] -> [a] -> [a]
[] ++ ys = ys
(x:xs) ++ ys = x : (xs ++ ys)

map :: (a -> b) -> [a] -> [b]
map f [] = []
map f (x:xs) = f x : map f xs

length :: [a] -> Nat
length [] = Z
length (x:xs) = S (length xs)

reverse :: [a] -> [a]
reverse [] = []
reverse (x:xs) = reverse xs ++ [x]

add :: Nat -> Nat -> Nat
add Z n = n
add (S m) n = S (add m n)

elem :: a -> [a] -> Bool
elem x [] = False
elem x (y:ys) = ite (x == y) True (elem x ys)

removeAll :: a -> [a] -> [a]
removeAll x [] = []
removeAll x (y:ys) = ite (x == y) (removeAll x ys) (y : removeAll x ys)

nub :: [a] -> [a]
nub [] = []
nub (x:xs) = x : nub (removeAll x xs)
)PRE";
}

}  // namespace fleng
